"""Library-wide numerical settings.

There is one finite-difference step and one set of quadrature defaults per
process, not per function object. The CLI overwrites them from flags, a JSON
config file (keys ``fd_step``, ``quad_panels``, ``quad_tol``, ``seed``) or the
``FNALG_FD_STEP`` / ``FNALG_SEED`` environment variables.
"""

import contextlib
import dataclasses
import json
import os
import threading

DEFAULT_FD_STEP = 0.001
DEFAULT_QUAD_PANELS = 256
DEFAULT_QUAD_MAX_REFINEMENTS = 12
DEFAULT_QUAD_TOL = 1e-9

CONFIG_KEYS = ("fd_step", "quad_panels", "quad_tol", "seed")


@dataclasses.dataclass
class Settings:
    fd_step: float = DEFAULT_FD_STEP
    quad_panels: int = DEFAULT_QUAD_PANELS
    quad_max_refinements: int = DEFAULT_QUAD_MAX_REFINEMENTS
    quad_tol: float = DEFAULT_QUAD_TOL
    seed: int = 0


settings = Settings()
_lock = threading.Lock()


def update(**changes):
    """Overwrite library defaults; unknown keys raise ``TypeError``.

    ``None`` values are skipped. Nothing changes if any value is invalid.
    """
    with _lock:
        staged = dataclasses.replace(settings)
        for key, value in changes.items():
            if value is None:
                continue
            if not hasattr(staged, key):
                raise TypeError(f"unknown setting {key!r}")
            setattr(staged, key, type(getattr(staged, key))(value))
        if staged.fd_step <= 0:
            raise ValueError("fd_step must be positive")
        for field in dataclasses.fields(Settings):
            setattr(settings, field.name, getattr(staged, field.name))


@contextlib.contextmanager
def overridden(**changes):
    saved = dataclasses.replace(settings)
    update(**changes)
    try:
        yield settings
    finally:
        with _lock:
            for field in dataclasses.fields(Settings):
                setattr(settings, field.name, getattr(saved, field.name))


def from_environment(environ=None):
    environ = os.environ if environ is None else environ
    out = {}
    if environ.get("FNALG_FD_STEP"):
        out["fd_step"] = float(environ["FNALG_FD_STEP"])
    if environ.get("FNALG_SEED"):
        out["seed"] = int(environ["FNALG_SEED"])
    return out


def from_file(path):
    with open(path) as fh:
        data = json.load(fh)
    unknown = set(data) - set(CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data
