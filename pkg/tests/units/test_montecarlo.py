import itertools

import numpy as np
import pytest

from mimodet import montecarlo, phy
from mimodet.config import settings
from mimodet.core import OpCount
from mimodet.detect import DetectorSpec, DetectResult
from mimodet.exceptions import ConfigError, GapUndefined, NearSingular
from mimodet.montecarlo import (
    SweepConfig,
    curveName,
    drawRealization,
    gapProfile,
    runSweep,
    runTrial,
    snrAtBer,
    summarize,
)


def sweep(N=8, U=4, mod="qpsk", snr=(0.0, 5.0), detectors=("mmse:chol",), **kwargs):
    return SweepConfig(
        N=N,
        U=U,
        modulation=mod,
        snrDb=tuple(snr),
        detectors=tuple(DetectorSpec.fromToken(d) for d in detectors),
        **kwargs,
    )


def curve(detector, snrs, bers, bits=10**6, params=""):
    return [
        {
            "n": 8,
            "u": 4,
            "mod": "qpsk",
            "detector": detector,
            "params": params,
            "snrDb": float(snr),
            "trialsRun": bits // 8,
            "bitErrors": int(round(ber * bits)),
            "bitsTotal": bits,
            "ber": ber,
            "stderr": 0.0,
            "failures": 0,
        }
        for snr, ber in zip(snrs, bers)
    ]


# (kwargs, reason)
bad_config_cases = [
    ({"U": 9}, "more users than antennas"),
    ({"trials": 0}, "no trials"),
    ({"snr": (5.0, 5.0)}, "repeated snr"),
    ({"snr": (5.0, 0.0)}, "decreasing snr"),
    ({"snr": ()}, "empty snr"),
    ({"mod": "8psk"}, "unknown modulation"),
    ({"stopAtErrors": 0}, "zero stop threshold"),
    ({"masterSeed": -1}, "negative seed"),
    ({"detectors": ()}, "no detectors"),
]


@pytest.mark.parametrize("kwargs,reason", bad_config_cases)
def test_bad_sweep_config(kwargs, reason):
    with pytest.raises(ConfigError):
        sweep(**kwargs)


def test_sweep_label():
    assert sweep(N=32, U=16, mod="64qam").label == "32x16 64qam"


def test_realizations_are_common_across_snr():
    config = sweep()
    low = drawRealization(config, 0.0, 7)
    high = drawRealization(config, 5.0, 7)

    np.testing.assert_array_equal(low.bits, high.bits)
    np.testing.assert_array_equal(low.H, high.H)
    np.testing.assert_allclose(
        low.noise / np.sqrt(low.sigma2), high.noise / np.sqrt(high.sigma2)
    )
    assert low.digest() == drawRealization(config, 0.0, 7).digest()
    assert low.digest() != drawRealization(config, 0.0, 8).digest()


def test_realization_does_not_depend_on_detectors():
    a = drawRealization(sweep(detectors=("mmse:chol",)), 3.0, 11)
    b = drawRealization(sweep(detectors=("cg:2", "simo")), 3.0, 11)
    assert a.digest() == b.digest()


def test_realization_is_consistent():
    r = drawRealization(sweep(), 5.0, 0)
    np.testing.assert_allclose(r.y, r.H @ r.x + r.noise)
    assert r.sigma2 == phy.sigma2FromSnr(5.0, 4)
    assert r.bits.size == 4 * 2


def test_noiseless_mmse_makes_no_errors():
    config = sweep(N=16, U=8, mod="64qam", snr=(200.0,))
    for trial in range(20):
        outcome = runTrial(config, 200.0, config.detectors[0], trial)
        assert outcome.bitErrors == 0
        assert outcome.bits == 8 * 6
        assert not outcome.failed


def test_single_user_zf_equals_simo():
    config = sweep(N=4, U=1, snr=(-4.0, 0.0, 4.0), detectors=("zf:chol", "simo"), trials=300)
    records = runSweep(config, threads=1, progress=False)
    zf = [r for r in records if r["detector"] == "ZF"]
    simo = [r for r in records if r["detector"] == "SIMO"]
    assert [r["bitErrors"] for r in zf] == [r["bitErrors"] for r in simo]


def test_mmse_is_no_better_than_maximum_likelihood():
    c = phy.Constellation(4)
    candidates = np.array(list(itertools.product(c.points, repeat=2)))
    config = sweep(N=4, U=2, snr=(4.0,), detectors=("mmse:chol",))

    ml_errors = mmse_errors = 0
    for trial in range(300):
        r = drawRealization(config, 4.0, trial)
        distances = np.linalg.norm(r.y[None, :] - candidates @ r.H.T, axis=1)
        decided, _ = phy.slice(candidates[np.argmin(distances)], c)
        ml_errors += int(np.count_nonzero(decided != r.bits))
        mmse_errors += runTrial(config, 4.0, config.detectors[0], trial).bitErrors

    assert ml_errors <= mmse_errors


def test_sweep_layout():
    config = sweep(detectors=("mmse:qr", "gs:2", "simo"), trials=60, stopAtErrors=None)
    records = runSweep(config, threads=1, progress=False)

    assert len(records) == 2 * 3
    assert [r["snrDb"] for r in records] == [0.0] * 3 + [5.0] * 3
    assert [curveName(r["detector"], r["params"]) for r in records[:3]] == [
        "MMSE(backend=QR)",
        "GS(t=2)",
        "SIMO",
    ]
    for r in records:
        assert r["trialsRun"] == 60
        assert r["bitsTotal"] == 60 * 4 * 2
        assert r["ber"] == r["bitErrors"] / r["bitsTotal"]
        assert r["stderr"] == pytest.approx(np.sqrt(r["ber"] * (1 - r["ber"]) / r["bitsTotal"]))


def test_sweep_is_reproducible():
    config = sweep(detectors=("mmse:chol", "nsa:2"), trials=80, masterSeed=5)
    assert runSweep(config, threads=1, progress=False) == runSweep(
        config, threads=1, progress=False
    )


def test_sweep_does_not_depend_on_worker_count():
    config = sweep(
        snr=(-2.0, 4.0), detectors=("mmse:chol", "gs:2", "cg:1"), trials=230, stopAtErrors=40
    )
    assert runSweep(config, threads=1, progress=False) == runSweep(
        config, threads=3, progress=False
    )


def test_early_stop_at_chunk_boundary():
    config = sweep(snr=(-5.0,), detectors=("mmse:chol", "simo"), trials=1000, stopAtErrors=60)
    for record in runSweep(config, threads=1, progress=False):
        assert record["bitErrors"] >= 60
        assert record["trialsRun"] < 1000
        assert record["trialsRun"] % 50 == 0


def test_no_early_stop_without_threshold():
    config = sweep(snr=(-5.0,), trials=120, stopAtErrors=None)
    (record,) = runSweep(config, threads=1, progress=False)
    assert record["trialsRun"] == 120


def test_detector_failures_are_counted(monkeypatch):
    def failing(*args, **kwargs):
        raise NearSingular("pivot 0 is 0")

    monkeypatch.setattr(montecarlo, "runDetector", failing)
    config = sweep(snr=(10.0,), trials=30, stopAtErrors=None)
    (record,) = runSweep(config, threads=1, progress=False)

    assert record["failures"] == 30
    assert record["ber"] == 1.0
    assert record["bitErrors"] == record["bitsTotal"]


def test_non_finite_estimates_are_counted_in_release_mode(monkeypatch):
    monkeypatch.setattr(settings, "checkFinite", False)

    def exploding(spec, H, y, sigma2, box=None):
        return DetectResult(xSoft=np.full(H.shape[1], np.nan + 0j), ops=OpCount())

    monkeypatch.setattr(montecarlo, "runDetector", exploding)
    (record,) = runSweep(sweep(snr=(10.0,), trials=20, stopAtErrors=None), threads=1, progress=False)

    assert record["failures"] == 20
    assert record["ber"] == 1.0


def test_divergent_series_does_not_abort_sweep(monkeypatch):
    monkeypatch.setattr(settings, "checkFinite", False)
    config = sweep(
        N=32,
        U=16,
        mod="64qam",
        snr=(20.0,),
        detectors=("mmse:chol", "nsa:5000"),
        trials=2,
        stopAtErrors=None,
    )
    # the series overflows long before 5000 terms; its norms end in NaN
    mmse, nsa = runSweep(config, threads=1, progress=False)

    assert mmse["failures"] == 0
    assert nsa["failures"] == 2
    assert nsa["bitErrors"] == nsa["bitsTotal"]


def test_configuration_errors_are_not_counted(monkeypatch):
    def misconfigured(*args, **kwargs):
        raise ConfigError("bad detector")

    monkeypatch.setattr(montecarlo, "runDetector", misconfigured)
    with pytest.raises(ConfigError):
        runSweep(sweep(trials=10), threads=1, progress=False)


def test_snr_at_ber_interpolates_in_log_domain():
    c = curve("MMSE", [0, 10], [1e-1, 1e-3])
    assert snrAtBer(c, 1e-2) == pytest.approx(5.0)
    assert snrAtBer(c, 1e-1) == pytest.approx(0.0)


def test_snr_at_ber_undefined():
    with pytest.raises(GapUndefined):
        snrAtBer(curve("GS", [0, 10, 20], [0.3, 0.1, 0.05]), 1e-2)  # error floor
    with pytest.raises(GapUndefined):
        snrAtBer(curve("GS", [0, 10], [1e-3, 1e-4]), 1e-2)  # starts below
    with pytest.raises(GapUndefined):
        snrAtBer([], 1e-2)


def test_zero_error_points_are_clamped():
    c = curve("MMSE", [0, 2], [1e-1, 0.0], bits=1000)
    # the zero point stands in for half an error, ber 5e-4
    assert snrAtBer(c, 1e-2) == pytest.approx(2 / (-1 - np.log10(5e-4)))


def test_identical_curves_have_no_gap():
    snrs = [0, 2, 4, 6, 8]
    bers = [2e-1, 8e-2, 2e-2, 4e-3, 5e-4]
    records = curve("MMSE", snrs, bers, params="backend=QR") + curve(
        "CG", snrs, bers, params="t=3"
    )
    (row,) = gapProfile(records, "MMSE(backend=QR)", "CG(t=3)", [1e-2])
    assert row["gapDb"] == pytest.approx(0.0, abs=1e-12)


def test_shifted_curve_gap():
    snrs = [0, 2, 4, 6, 8, 10, 12]
    bers = [2e-1, 8e-2, 2e-2, 4e-3, 5e-4, 5e-5, 4e-6]
    shifted = [s + 3 for s in snrs]
    records = curve("MMSE", snrs, bers, params="backend=QR") + curve(
        "NSA", shifted, bers, params="t=3"
    )

    rows = gapProfile(records, "MMSE(backend=QR)", "NSA(t=3)", [1e-1, 1e-2, 1e-3])
    for row in rows:
        assert row["gapDb"] == pytest.approx(3.0, abs=0.1)
        assert row["note"] is None
        assert row["gapDb"] == row["snrDetector"] - row["snrReference"]


def test_gap_profile_unknown_curve():
    records = curve("MMSE", [0, 10], [1e-1, 1e-3], params="backend=QR")
    with pytest.raises(ConfigError):
        gapProfile(records, "MMSE(backend=QR)", "GS(t=3)", [1e-2])


def test_summary_against_mmse():
    snrs = [0, 5, 10]
    records = (
        curve("GS", snrs, [2e-1, 3e-2, 2e-3], params="t=3")
        + curve("MMSE", snrs, [1e-1, 1e-2, 1e-4], params="backend=QR")
        + curve("NSA", snrs, [3e-1, 2e-1, 1e-1], params="t=3")
    )
    rows = summarize(records, targets=[1e-2])

    assert [row["reference"] for row in rows] == ["MMSE(backend=QR)"] * 2
    gs, nsa = rows
    assert gs["detector"] == "GS(t=3)"
    assert gs["gapDb"] > 0
    assert nsa["gapDb"] is None
    assert nsa["note"]


def test_summary_reference_must_exist():
    with pytest.raises(ConfigError):
        summarize(curve("MMSE", [0, 10], [1e-1, 1e-3]), reference="ZF")
    assert summarize([]) == []
