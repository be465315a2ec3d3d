"""Python bindings for the mqslink inductive link model."""

import json as _json

from ._mqslink import *  # noqa: F401,F403
from ._mqslink import __version__, run as _run


def run(config_text, out_dir, allow_defaults=False, threads=1):
    """Run a scenario config; returns the parsed report dictionary."""
    return _json.loads(_run(config_text, str(out_dir), allow_defaults, threads))
