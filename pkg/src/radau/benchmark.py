"""Work-precision benchmark harness.

Runs a tolerance sweep over one of the registered stiff problems,
compares each solve against a tight-tolerance reference (cached on disk
as decimal text), and collects error, wall time, and solver statistics
into records suitable for CSV export and log-log plotting.
"""

from __future__ import annotations

import json
import math
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
import numpy as np

from . import linalg
from .exceptions import SolverFailure, TooFewPoints
from .linalg import DOUBLE_BITS
from .problems import get_problem
from .solver import Solution, SolverOptions, StepStats, solve

CSV_HEADER = ("problem,rtol,atol,error,wall_time_s,n_steps,n_rejected,"
              "n_f_evals,n_jac_evals,n_lu,order_min,order_max,order_mode,"
              "status")


@dataclass(frozen=True)
class SweepSpec:
    """One work-precision sweep: rtol = 10^e for each exponent, paired
    with atol = 10^(e + atol_offset), against a reference solved at
    rtol = atol = ref_tol."""

    problem: str
    rtol_exponents: tuple
    atol_offset: int
    ref_tol: float
    precision_bits: int = DOUBLE_BITS
    min_order: int = 5
    max_order: int = 25
    repetitions: int = 3
    parallel_blocks: bool = False

    def __post_init__(self):
        if not self.rtol_exponents:
            raise ValueError("rtol_exponents must be nonempty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        tightest = min(self.rtol_exponents)
        if not float(self.ref_tol) < 10.0 ** tightest:
            raise ValueError(
                f"ref_tol {self.ref_tol} must be strictly tighter than "
                f"every sweep rtol (tightest exponent {tightest})")

    def tolerance_pairs(self):
        return [(10.0 ** e, 10.0 ** (e + self.atol_offset))
                for e in self.rtol_exponents]


@dataclass
class WpRecord:
    problem: str
    rtol: float
    atol: float
    error: float | None
    wall_time_s: float | None
    stats: StepStats = field(default_factory=StepStats)
    order_min: int | None = None
    order_max: int | None = None
    order_mode: int | None = None
    status: str = "success"


# ---------------------------------------------------------------------------
# Reference solutions
# ---------------------------------------------------------------------------

@dataclass
class ReferenceSolution:
    problem: str
    ref_tol: float
    precision_bits: int
    ts: list
    y_final: np.ndarray


def _digits(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 3


def _num_to_text(x, bits: int) -> str:
    if bits <= DOUBLE_BITS:
        return repr(float(x))
    return mpmath.nstr(mpmath.mpf(x), _digits(bits), strip_zeros=True)


def _num_from_text(sv: str, bits: int):
    if bits <= DOUBLE_BITS:
        return float(sv)
    with mpmath.workprec(bits):
        return mpmath.mpf(sv)


def serialize_reference(ref: ReferenceSolution) -> str:
    bits = ref.precision_bits
    doc = {
        "problem": ref.problem,
        "ref_tol": repr(float(ref.ref_tol)),
        "precision_bits": bits,
        "ts": [_num_to_text(t, bits) for t in ref.ts],
        "y_final": [_num_to_text(v, bits) for v in ref.y_final],
    }
    return json.dumps(doc, indent=1)


def deserialize_reference(text: str) -> ReferenceSolution:
    doc = json.loads(text)
    bits = int(doc["precision_bits"])
    ts = [_num_from_text(sv, bits) for sv in doc["ts"]]
    yv = [_num_from_text(sv, bits) for sv in doc["y_final"]]
    y = (np.array(yv) if bits <= DOUBLE_BITS
         else np.array(yv, dtype=object))
    return ReferenceSolution(problem=doc["problem"],
                             ref_tol=float(doc["ref_tol"]),
                             precision_bits=bits, ts=ts, y_final=y)


def cache_dir() -> Path:
    env = os.environ.get("RADAU_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "radau"


def _cache_path(problem: str, ref_tol: float, bits: int,
                directory: Path | None) -> Path:
    d = directory if directory is not None else cache_dir()
    return d / f"ref_{problem}_{float(ref_tol):.3e}_{bits}bits.json"


def compute_reference(problem: str, ref_tol: float,
                      precision_bits: int = DOUBLE_BITS,
                      directory: Path | None = None,
                      min_order: int = 5,
                      max_order: int = 25) -> ReferenceSolution:
    """Solve at rtol = atol = ref_tol, caching the result on disk and
    reusing the cache on later calls with the same key."""
    path = _cache_path(problem, ref_tol, precision_bits, directory)
    if path.exists():
        ref = deserialize_reference(path.read_text())
        if (ref.problem == problem and ref.ref_tol == float(ref_tol)
                and ref.precision_bits == precision_bits):
            return ref
    named = get_problem(problem, precision_bits)
    opts = SolverOptions(rtol=ref_tol, atol=ref_tol,
                         min_order=min_order, max_order=max_order,
                         precision_bits=precision_bits)
    try:
        sol = solve(named.prob, opts)
    except SolverFailure as exc:
        raise type(exc)(f"reference solve for {problem!r} at "
                        f"tol={ref_tol}: {exc}") from exc
    ref = ReferenceSolution(problem=problem, ref_tol=float(ref_tol),
                            precision_bits=precision_bits,
                            ts=sol.ts, y_final=sol.y_final)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_reference(ref))
    return ref


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def scaled_error(y, y_ref, ref_tol: float) -> float:
    """Scaled L2 distance to the reference final state, with the scaling
    tolerances pinned at the reference tolerance so errors are comparable
    across a sweep."""
    yf = np.array([float(v) for v in np.asarray(y).reshape(-1)])
    rf = np.array([float(v) for v in np.asarray(y_ref).reshape(-1)])
    sc = float(ref_tol) * (1.0 + np.abs(rf))
    return math.sqrt(float(np.mean(((yf - rf) / sc) ** 2)))


def _order_summary(sol: Solution):
    if not sol.orders:
        return None, None, None
    counts = Counter(sol.orders)
    top = max(counts.values())
    mode = min(o for o, cnt in counts.items() if cnt == top)
    return min(sol.orders), max(sol.orders), mode


def run_sweep(spec: SweepSpec, directory: Path | None = None,
              timed: bool = True) -> list[WpRecord]:
    """One record per tolerance pair; failures become failed rows rather
    than aborting the sweep.  With ``timed`` false the warmup/repetition
    loop is skipped and wall times come from a single solve."""
    ref = compute_reference(spec.problem, spec.ref_tol, spec.precision_bits,
                            directory, spec.min_order, spec.max_order)
    named = get_problem(spec.problem, spec.precision_bits)
    records = []
    for rtol, atol in spec.tolerance_pairs():
        opts = SolverOptions(rtol=rtol, atol=atol,
                             min_order=spec.min_order,
                             max_order=spec.max_order,
                             parallel_blocks=spec.parallel_blocks,
                             precision_bits=spec.precision_bits)
        try:
            reps = spec.repetitions if timed else 1
            best = math.inf
            if timed:
                solve(named.prob, opts)  # warmup
            for _ in range(reps):
                t0 = time.perf_counter()
                sol = solve(named.prob, opts)
                best = min(best, time.perf_counter() - t0)
        except SolverFailure:
            records.append(WpRecord(problem=spec.problem, rtol=rtol,
                                    atol=atol, error=None, wall_time_s=None,
                                    status="failed"))
            continue
        omin, omax, omode = _order_summary(sol)
        records.append(WpRecord(
            problem=spec.problem, rtol=rtol, atol=atol,
            error=scaled_error(sol.y_final, ref.y_final, spec.ref_tol),
            wall_time_s=best, stats=sol.stats,
            order_min=omin, order_max=omax, order_mode=omode,
            status="success"))
    return records


# ---------------------------------------------------------------------------
# Artifacts
# ---------------------------------------------------------------------------

def _csv_row(r: WpRecord) -> str:
    st = r.stats
    err = "" if r.error is None else repr(float(r.error))
    wt = "" if r.wall_time_s is None else repr(float(r.wall_time_s))
    fmt_o = lambda o: "" if o is None else str(o)
    return ",".join([
        r.problem, repr(float(r.rtol)), repr(float(r.atol)), err, wt,
        str(st.n_steps), str(st.n_rejected), str(st.n_f_evals),
        str(st.n_jac_evals), str(st.n_lu_factorizations),
        fmt_o(r.order_min), fmt_o(r.order_max), fmt_o(r.order_mode),
        r.status,
    ])


def emit_csv(records: list[WpRecord], path) -> None:
    if not records:
        raise ValueError("no records to write")
    lines = [CSV_HEADER] + [_csv_row(r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def parse_csv(path) -> list[WpRecord]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unrecognized CSV header in {path}")
    out = []
    for line in lines[1:]:
        cells = line.split(",")
        st = StepStats(n_steps=int(cells[5]), n_rejected=int(cells[6]),
                       n_f_evals=int(cells[7]), n_jac_evals=int(cells[8]),
                       n_lu_factorizations=int(cells[9]))
        opt_f = lambda sv: None if sv == "" else float(sv)
        opt_i = lambda sv: None if sv == "" else int(sv)
        out.append(WpRecord(problem=cells[0], rtol=float(cells[1]),
                            atol=float(cells[2]), error=opt_f(cells[3]),
                            wall_time_s=opt_f(cells[4]), stats=st,
                            order_min=opt_i(cells[10]),
                            order_max=opt_i(cells[11]),
                            order_mode=opt_i(cells[12]), status=cells[13]))
    return out


def emit_plot(records, path) -> None:
    """Log-log work-precision plot (error vs wall time) written as a
    standalone vector file.  ``records`` is either a record list or a
    mapping of series label to record list for overlaid curves."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series = records if isinstance(records, dict) else {"radau": records}
    cleaned = {}
    total = 0
    for label, recs in series.items():
        ok = [r for r in recs if r.status == "success" and r.error is not None
              and r.error > 0 and r.wall_time_s]
        cleaned[label] = ok
        total += len(ok)
    if total < 2:
        raise TooFewPoints(
            f"need at least 2 successful records to plot, got {total}")
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for label, ok in cleaned.items():
        if not ok:
            continue
        xs = [r.error for r in ok]
        ys = [r.wall_time_s for r in ok]
        ax.loglog(xs, ys, marker="o", label=label)
    ax.set_xlabel("scaled error at final time")
    ax.set_ylabel("wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
