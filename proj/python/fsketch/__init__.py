"""Composable sampling sketches for concave sublinear frequency statistics."""

try:
    from . import _fsketch as _ext
except ImportError:  # in-tree build: the extension sits next to the package
    import _fsketch as _ext

FsketchError = _ext.FsketchError
FunctionSpec = _ext.FunctionSpec
SketchOptions = _ext.SketchOptions
SeedEntry = _ext.SeedEntry
FinalSample = _ext.FinalSample
Sketch = _ext.Sketch
estimate = _ext.estimate
seed_cdf = _ext.seed_cdf
nrmse_bound = _ext.nrmse_bound
replica_count = _ext.replica_count
zipf_stream = _ext.zipf_stream
read_elements = _ext.read_elements


def experiment(source, **kwargs):
    """Runs the repetition harness and returns the parsed JSON report."""
    import json

    return json.loads(_ext.experiment(source, **kwargs))


__all__ = [
    "FsketchError",
    "FunctionSpec",
    "SketchOptions",
    "SeedEntry",
    "FinalSample",
    "Sketch",
    "estimate",
    "seed_cdf",
    "nrmse_bound",
    "replica_count",
    "zipf_stream",
    "read_elements",
    "experiment",
]
