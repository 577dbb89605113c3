import os
from pathlib import Path

import mpmath
import numpy as np
import pytest
from scipy.stats import spearmanr

import radau.benchmark as bm
from radau.benchmark import (
    CSV_HEADER,
    ReferenceSolution,
    SweepSpec,
    WpRecord,
    compute_reference,
    deserialize_reference,
    emit_csv,
    emit_plot,
    parse_csv,
    run_sweep,
    serialize_reference,
)
from radau.cli import main, parse_exponent_range
from radau.exceptions import TooFewPoints
from radau.solver import StepStats


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("robertson", (), -5, 1e-14)
    with pytest.raises(ValueError):
        SweepSpec("robertson", (-4,), -5, 1e-4)    # ref not tighter
    with pytest.raises(ValueError):
        SweepSpec("robertson", (-4,), -5, 1e-14, repetitions=0)
    spec = SweepSpec("robertson", (-4, -5), -5, 1e-14)
    assert spec.tolerance_pairs() == [(1e-4, 1e-9), (1e-5, 1e-10)]


def test_reference_round_trip_double():
    ref = ReferenceSolution("robertson", 1e-14, 53,
                            ts=[0.0, 0.1 + 1e-17, 1.0 / 3.0],
                            y_final=np.array([1.0, 2.0 ** -40, 0.1]))
    back = deserialize_reference(serialize_reference(ref))
    assert back.ts == ref.ts
    assert (back.y_final == ref.y_final).all()
    assert back.precision_bits == 53 and back.ref_tol == 1e-14


def test_reference_round_trip_high_precision():
    bits = 256
    with mpmath.workprec(bits):
        ts = [mpmath.mpf(0), mpmath.mpf(1) / 3, mpmath.mpf("2.718281828") ** 2]
        y = np.array([mpmath.mpf(1) / 7, mpmath.mpf("1e-30")], dtype=object)
        ref = ReferenceSolution("oregonator", 1e-24, bits, ts=ts, y_final=y)
        back = deserialize_reference(serialize_reference(ref))
        assert all(a == b for a, b in zip(back.ts, ref.ts))
        assert all(a == b for a, b in zip(back.y_final, ref.y_final))


def test_compute_reference_caches(tmp_path, monkeypatch):
    calls = []
    real_solve = bm.solve

    def counting(prob, opts):
        calls.append(1)
        return real_solve(prob, opts)

    monkeypatch.setattr(bm, "solve", counting)
    r1 = compute_reference("robertson", 1e-10, directory=tmp_path)
    assert len(calls) == 1
    r2 = compute_reference("robertson", 1e-10, directory=tmp_path)
    assert len(calls) == 1                      # second call read the cache
    assert all(a == b for a, b in zip(r1.y_final, r2.y_final))
    assert list(tmp_path.glob("ref_robertson_*.json"))


def test_cache_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("RADAU_CACHE_DIR", str(tmp_path / "alt"))
    assert bm.cache_dir() == tmp_path / "alt"


def _tiny_sweep(tmp_path, **kw):
    spec = SweepSpec("robertson", (-4, -5, -6), -5, 1e-12, **kw)
    return run_sweep(spec, directory=tmp_path, timed=False)


def test_run_sweep_records(tmp_path):
    recs = _tiny_sweep(tmp_path)
    assert len(recs) == 3
    assert all(r.status == "success" for r in recs)
    assert all(r.error >= 0 and r.wall_time_s > 0 for r in recs)
    assert all(r.order_min is not None for r in recs)
    # tighter tolerance, smaller error (monotone on this short sweep)
    rho = spearmanr([r.rtol for r in recs], [r.error for r in recs]).statistic
    assert rho > 0


def test_run_sweep_single_point(tmp_path):
    spec = SweepSpec("robertson", (-4,), -5, 1e-12)
    assert len(run_sweep(spec, directory=tmp_path, timed=False)) == 1


def test_csv_round_trip(tmp_path):
    recs = _tiny_sweep(tmp_path)
    recs.append(WpRecord(problem="robertson", rtol=1e-7, atol=1e-12,
                         error=None, wall_time_s=None, status="failed"))
    out = tmp_path / "wp.csv"
    emit_csv(recs, out)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 5
    failed = lines[-1].split(",")
    assert failed[3] == "" and failed[4] == "" and failed[-1] == "failed"
    back = parse_csv(out)
    for a, b in zip(recs, back):
        assert (a.problem, a.rtol, a.atol, a.status) == \
            (b.problem, b.rtol, b.atol, b.status)
        assert a.error == b.error and a.wall_time_s == b.wall_time_s
        if a.stats is None:
            assert b.stats is None
        else:
            # only the counters with CSV columns survive the round trip
            for field in ("n_steps", "n_rejected", "n_f_evals",
                          "n_jac_evals", "n_lu_factorizations"):
                assert getattr(a.stats, field) == getattr(b.stats, field)
        assert (a.order_min, a.order_max, a.order_mode) == \
            (b.order_min, b.order_max, b.order_mode)


def test_csv_determinism_excluding_time(tmp_path):
    r1 = _tiny_sweep(tmp_path)
    r2 = _tiny_sweep(tmp_path)
    strip = lambda recs: [(r.problem, r.rtol, r.atol, r.error, r.stats,
                           r.order_min, r.order_max, r.order_mode, r.status)
                          for r in recs]
    assert strip(r1) == strip(r2)


def test_emit_plot(tmp_path):
    recs = _tiny_sweep(tmp_path)
    out = tmp_path / "wp.svg"
    emit_plot(recs, out)
    body = out.read_text()
    assert body.lstrip().startswith("<?xml") and "svg" in body


def test_emit_plot_overlay_and_too_few(tmp_path):
    recs = _tiny_sweep(tmp_path)
    out = tmp_path / "overlay.svg"
    emit_plot({"adaptive": recs, "other": recs[:2]}, out)
    assert out.exists()
    with pytest.raises(TooFewPoints):
        emit_plot(recs[:1], tmp_path / "nope.svg")


# -- CLI ----------------------------------------------------------------------

def test_parse_exponent_range():
    assert parse_exponent_range("-5..-12") == tuple(range(-5, -13, -1))
    assert parse_exponent_range("-12..-5") == tuple(range(-12, -4))
    assert parse_exponent_range("-7") == (-7,)


def test_cli_tableau(tmp_path, capsys):
    assert main(["tableau", "--stages", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# radau-iia s=3 prec=53")
    f = tmp_path / "tab.txt"
    assert main(["tableau", "--stages", "5", "--precision", "100",
                 "--out", str(f)]) == 0
    assert f.read_text().startswith("# radau-iia s=5 prec=100")


def test_cli_solve(capsys):
    assert main(["solve", "--problem", "robertson",
                 "--rtol", "1e-5", "--atol", "1e-10"]) == 0
    out = capsys.readouterr().out
    assert "t_final" in out and "steps=" in out


def test_cli_bench(tmp_path, capsys):
    csv = tmp_path / "out.csv"
    plot = tmp_path / "out.svg"
    rc = main(["bench", "--problem", "robertson", "--rtol-exps", "-4..-6",
               "--atol-offset", "-5", "--ref-tol", "1e-12", "--reps", "1",
               "--out", str(csv), "--plot", str(plot)])
    assert rc == 0
    assert len(parse_csv(csv)) == 3
    assert plot.exists()


def test_cli_fixed_order(tmp_path):
    csv = tmp_path / "f5.csv"
    rc = main(["bench", "--problem", "robertson", "--rtol-exps", "-4",
               "--atol-offset", "-5", "--ref-tol", "1e-12", "--reps", "1",
               "--fixed-order", "5", "--out", str(csv)])
    assert rc == 0
    rec = parse_csv(csv)[0]
    assert rec.order_min == rec.order_max == 5


def test_cli_config_errors(capsys):
    assert main(["bench", "--problem", "nosuch", "--out", "x.csv"]) == 1
    assert main(["solve", "--problem", "robertson", "--rtol", "-1",
                 "--atol", "1e-8"]) == 1
    assert main(["bench", "--problem", "robertson", "--ref-tol", "1",
                 "--out", "x.csv"]) == 1
