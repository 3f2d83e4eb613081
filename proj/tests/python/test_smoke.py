import math

import pytest

import fsketch


def test_sketch_sample_estimate():
    stream = fsketch.zipf_stream(1.5, 5000, seed=3)
    sk = fsketch.Sketch(k=20, eps=0.5, fn="sqrt", seed=5)
    sk.update(stream)
    assert sk.sum == pytest.approx(5000.0)
    assert sk.r == 40
    sample = sk.sample()
    assert len(sample.sampled()) == 19
    assert math.isfinite(sample.tau)
    total, per_key = fsketch.estimate(sample, stream, "sqrt")
    assert set(per_key) == set(sample.keys())
    counts = {}
    for key, val in stream:
        counts[key] = counts.get(key, 0.0) + val
    truth = sum(math.sqrt(v) for v in counts.values())
    assert 0.2 * truth < total < 5 * truth


def test_merge_and_json_roundtrip():
    stream = fsketch.zipf_stream(1.2, 2000, seed=9)
    a = fsketch.Sketch(10, 0.5, "log1p", seed=1)
    b = fsketch.Sketch(10, 0.5, "log1p", seed=1)
    a.update(stream[:1000])
    b.update(stream[1000:])
    a.merge(b)
    assert a.sum == pytest.approx(2000.0)
    back = fsketch.Sketch.from_json(a.to_json())
    assert back == a
    s = a.sample()
    assert fsketch.FinalSample.from_json(s.to_json()) == s


def test_errors_map_to_exception():
    with pytest.raises(fsketch.FsketchError, match="invalid-parameter"):
        fsketch.Sketch(2, 0.5, "sqrt")
    sk = fsketch.Sketch(5, 0.5, "sqrt")
    with pytest.raises(fsketch.FsketchError):
        sk.process("x", -1.0)
    with pytest.raises(fsketch.FsketchError, match="incompatible-sketch"):
        sk.merge(fsketch.Sketch(5, 0.5, "log1p"))


def test_transforms_and_bound():
    spec = fsketch.FunctionSpec("softcap:2")
    assert spec.f(3.0) == pytest.approx(2.0 * (1 - math.exp(-1.5)))
    assert spec.laplace_c(3.0) == pytest.approx(spec.f(3.0), rel=1e-9)
    assert round(fsketch.nrmse_bound(25, 0.5), 3) == 0.834
    assert 0.0 <= fsketch.seed_cdf(2.0, 0.1, "sqrt", 0.2, 6) <= 1.0


def test_options_do_not_change_sample():
    stream = fsketch.zipf_stream(1.5, 3000, seed=4)
    on = fsketch.Sketch(8, 0.5, "sqrt", seed=2)
    off = fsketch.Sketch(8, 0.5, "sqrt", seed=2, options=fsketch.SketchOptions(False, False))
    on.update(stream)
    off.update(stream)
    assert on.sample() == off.sample()
    assert on.size()[1] <= off.size()[1]


def test_experiment_report():
    report = fsketch.experiment("zipf:alpha=1.5,n=3000,seed=2", ks=[10], reps=5)
    (row,) = report["rows"]
    assert row["k"] == 10 and row["reps"] == 5 and len(row["runs"]) == 5
    assert row["bound"] == pytest.approx(fsketch.nrmse_bound(10, 0.5))
