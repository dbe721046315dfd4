import json as _json

try:
    from . import _kpzlab as _ext
except ImportError:
    import _kpzlab as _ext

from_ext = [
    "weight",
    "lpp_value",
    "geodesic",
    "scaled_value",
    "busemann_profile",
    "evolve_flat",
    "mixed_interface",
    "suites",
    "KpzlabError",
]
globals().update({name: getattr(_ext, name) for name in from_ext})
__version__ = _ext.__version__


def run_suite(id, seed=1, n=None):
    """Run a verification suite and return its report as a dict."""
    return _json.loads(_ext.run_suite(id, seed, n))


__all__ = from_ext + ["run_suite", "__version__"]
