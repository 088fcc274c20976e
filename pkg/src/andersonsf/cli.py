"""Command-line front end: ``andersonsf <command> [flags]``.

Commands: omega, period, exp-coeffs, sf, residue, filtration, verify.
Every command prints a table of checks (residual in pi-digits, threshold,
verdict) and can write the full report as JSON.  Exit codes: 0 all checks
pass, 1 a check failed or precision ran out, 2 bad usage or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from .base_arith import INF, CinfNum, FieldParams, PrecisionError, cinf_from_json, cinf_to_json, lambda_theta
from .exp_lattice import carlitz_period, exp_coeffs, lattice_member
from .special_fn import (Residual, anderson_thakur_omega, filtration_ranks, relative_residual, residue_at_j,
                         sf_check, sf_from_lattice, standard_basis)
from .tate_mero import TateSeries, holomorphy_check, mero_to_json, series_to_json
from .tmodule import module_from_descriptor


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    q: int = None  # unset: 2, or both 2 and 3 for verify
    p_exp: int = None
    m: int = 0
    ram: int = 0
    prec: int = 200
    tdeg: int = 48
    horizon: int = 6
    guard: int = 2
    terms: int = None
    module: object = "carlitz"
    lam: object = None
    u: tuple = (0, 1)
    seed: int = 0
    threshold: int = None

    def validate(self):
        errors = []
        for name in ("prec", "tdeg", "guard"):
            if getattr(self, name) < 1:
                errors.append(f"{name} must be positive")
        if self.horizon < 0:
            errors.append("horizon must be >= 0")
        if self.terms is not None and self.terms < 1:
            errors.append("terms must be positive")
        if self.threshold is not None and not 0 < self.threshold < self.prec:
            errors.append("threshold must lie strictly between 0 and prec")
        try:
            self.field()
        except ValueError as exc:
            errors.append(f"field: {exc}")
        if errors:
            raise ConfigError("; ".join(errors))
        return self

    def field(self):
        kw = {"m": self.m, "r": self.ram, "P": self.prec}
        if self.p_exp is not None:
            return FieldParams(p=self.q or 2, e=self.p_exp, **kw)
        return FieldParams.for_q(self.q or 2, **kw)

    @property
    def thr(self):
        return self.prec // 2 if self.threshold is None else self.threshold


@dataclass
class Report:
    command: str
    config: dict
    outputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def add(self, res):
        self.checks.append(res.as_dict())

    def to_json(self):
        return {"command": self.command, "config": self.config, "outputs": self.outputs,
                "checks": self.checks, "timings": self.timings, "passed": self.passed}


def _fmt_res(check):
    x = check.get("residual")
    if x is None:
        return "-" if check.get("threshold") is None else "zero"
    return str(x)


def render_table(report, out=None):
    out = out or sys.stdout
    print(f"# {report.command}  ({', '.join(f'{k}={v}' for k, v in report.config.items() if v is not None)})", file=out)
    for key, val in report.outputs.items():
        if isinstance(val, (str, int, float)) or val is None:
            print(f"  {key}: {val}", file=out)
    if report.checks:
        width = max(len(c["name"]) for c in report.checks)
        print(f"  {'check'.ljust(width)}  residual  threshold  verdict", file=out)
        for c in report.checks:
            verdict = "PASS" if c["passed"] else "FAIL"
            print(f"  {c['name'].ljust(width)}  {_fmt_res(c):>8}  {str(c.get('threshold')):>9}  {verdict}",
                  file=out)
    total = sum(report.timings.values())
    print(f"  time: {total:.2f}s", file=out)


# -- commands ---------------------------------------------------------------------------
def _text(x):
    from .base_arith import cinf_to_text
    return cinf_to_text(x)


def cmd_omega(cfg, rep):
    P = cfg.field()
    W = anderson_thakur_omega(P, cfg.horizon, cfg.guard, cfg.terms)
    om = W.comps[0]
    lam = lambda_theta(P)
    disk = om.expand_on_disk(cfg.tdeg)
    rep.outputs["lambda_theta"] = cinf_to_json(lam)
    rep.outputs["value_at_0"] = cinf_to_json(disk.coeffs[0])
    rep.outputs["principal_parts"] = mero_to_json(om)
    rep.outputs["disk_expansion"] = series_to_json(disk)
    rep.outputs["residue"] = _text(om.residue())
    rep.add(Residual("omega(0) == lambda_theta", _rel(disk.coeffs[0] - lam, lam), cfg.thr))
    lin = TateSeries(P, [-CinfNum.theta(P), CinfNum.one(P)])
    rep.add(Residual("twist(omega) == (t - theta) omega", relative_residual([om.twist() - om * lin], [om]), cfg.thr))
    rep.add(Residual("sf_check", sf_check(W.E, W, cfg.thr).residual, cfg.thr))
    rep.add(Residual("holomorphic off J, simple poles", INF if holomorphy_check(om, 1) else -INF, cfg.thr))


def _rel(diff, ref):
    if diff.is_zero():
        return INF
    return diff.val - ref.val


def cmd_period(cfg, rep):
    P = cfg.field()
    pi = carlitz_period(P, cfg.terms)
    from .tmodule import carlitz

    ec = exp_coeffs(carlitz(P), cfg.horizon + cfg.guard + 2)
    rep.outputs["period"] = cinf_to_json(pi)
    rep.outputs["period_text"] = _text(pi)
    rep.outputs["valuation_pi_units"] = pi.val
    rep.outputs["valuation_log_q"] = f"{pi.val}/{P.r}"
    W = anderson_thakur_omega(P, cfg.horizon, cfg.guard)
    rep.add(Residual("period == residue of omega", _rel(W.comps[0].residue() - pi, pi), cfg.thr))
    ok, res = lattice_member(ec, [pi], cfg.thr)
    rep.add(Residual("exp(period) == 0", res, cfg.thr))
    ok2, res2 = lattice_member(ec, [pi * CinfNum.theta(P).inv()], cfg.thr)
    rep.checks.append({"name": "exp(period/theta) != 0", "residual": res2, "threshold": cfg.thr,
                       "passed": not ok2})


def cmd_exp_coeffs(cfg, rep):
    P = cfg.field()
    E = module_from_descriptor(P, cfg.module)
    count = cfg.terms or cfg.horizon + cfg.guard + 1
    ec = exp_coeffs(E, count)
    rep.outputs["module"] = E.name
    rep.outputs["coefficients"] = [[[cinf_to_json(x) for x in row] for row in e] for e in ec.coeffs[: cfg.horizon + 1]]
    rep.outputs["valuations"] = ec.vals()
    for n, r in enumerate(ec.residuals):
        rep.add(Residual(f"functional equation, tau-degree {n}", r, cfg.thr))


def _parse_lambda(cfg, E, basis=None):
    P = E.params
    if cfg.lam is None or cfg.lam == "generator":
        basis = basis or standard_basis(E, cfg.horizon, cfg.guard)
        return residue_at_j(basis[-1])
    if isinstance(cfg.lam, str) and cfg.lam.startswith("generator:"):
        basis = basis or standard_basis(E, cfg.horizon, cfg.guard)
        return residue_at_j(basis[int(cfg.lam.split(":")[1])])
    if cfg.lam == "period":
        return [carlitz_period(P)] + [CinfNum.zero(P)] * (E.d - 1)
    lam = cfg.lam if isinstance(cfg.lam, list) else json.loads(cfg.lam)
    if len(lam) != E.d:
        raise ConfigError(f"lambda has {len(lam)} coordinates; the module has dimension {E.d}")
    try:
        return [cinf_from_json(P, x) for x in lam]
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"lambda: cannot parse coordinates ({exc})")


def cmd_sf(cfg, rep):
    P = cfg.field()
    E = module_from_descriptor(P, cfg.module)
    lam = _parse_lambda(cfg, E)
    ec = exp_coeffs(E, cfg.horizon + cfg.guard + 2)
    w = sf_from_lattice(E, lam, cfg.u, ec, cfg.horizon, cfg.guard, cfg.thr)
    rep.outputs["module"] = E.name
    rep.outputs["lambda"] = [cinf_to_json(x) for x in lam]
    rep.outputs["components"] = [mero_to_json(c) for c in w.comps]
    rep.outputs["max_pole_order"] = w.max_pole_order()
    rep.add(Residual("poles off J cancel", w.source["cancellation"], cfg.thr))
    rep.add(Residual("sf_check", sf_check(E, w, cfg.thr).residual, cfg.thr))
    diff = [a - b for a, b in zip(residue_at_j(w), lam)]
    rep.add(Residual("residue == lambda", relative_residual(diff, lam), cfg.thr))
    ok, res = lattice_member(ec, lam, cfg.thr)
    rep.add(Residual("lambda in the period lattice", res, cfg.thr))


def cmd_residue(cfg, rep):
    P = cfg.field()
    E = module_from_descriptor(P, cfg.module)
    ec = exp_coeffs(E, cfg.horizon + cfg.guard + 2)
    basis = standard_basis(E, cfg.horizon, cfg.guard)
    rep.outputs["module"] = E.name
    rep.outputs["residues"] = []
    for j, w in enumerate(basis, start=1):
        lam = residue_at_j(w)
        rep.outputs["residues"].append([cinf_to_json(x) for x in lam])
        rep.add(Residual(f"sf_check basis {j}", sf_check(E, w, cfg.thr).residual, cfg.thr))
        ok, res = lattice_member(ec, lam, cfg.thr)
        rep.add(Residual(f"exp(residue of basis {j}) == 0", res, cfg.thr))


def cmd_filtration(cfg, rep):
    P = cfg.field()
    E = module_from_descriptor(P, cfg.module)
    basis = standard_basis(E, cfg.horizon, cfg.guard)
    for j, w in enumerate(basis, start=1):
        rep.add(Residual(f"sf_check basis {j}", sf_check(E, w, cfg.thr).residual, cfg.thr))
    ranks, jumps = filtration_ranks(E, basis, cfg.thr, check=False)
    rep.outputs["module"] = E.name
    rep.outputs["ranks"] = ranks
    rep.outputs["jumps"] = jumps
    rep.outputs["summary"] = f"ranks {ranks}, jumps {jumps}"
    rep.checks.append({"name": "r_0 == 0 (no special functions without poles)", "residual": None,
                       "threshold": None, "passed": ranks[0] == 0})


def cmd_verify(cfg, rep):
    from .acceptance import run_suite

    if cfg.q is None and cfg.p_exp is None:
        fields = [FieldParams.for_q(2, P=cfg.prec), FieldParams.for_q(3, P=cfg.prec)]
    else:
        fields = [cfg.field()]
    results = run_suite(fields, cfg.horizon, cfg.guard, cfg.threshold, cfg.seed)
    rep.outputs["criteria"] = []
    for num, title, passed, cases, secs in results:
        rep.outputs["criteria"].append({"criterion": num, "title": title, "passed": passed, "seconds": round(secs, 3),
                                        "cases": [dict(c.as_dict(), q=q) for q, c in cases]})
        # the smallest margin among cases that carry a numeric threshold
        worst = [c.residual for _, c in cases
                 if c.residual is not None and c.threshold is not None and c.detail.get("expected") != "fail"]
        rep.checks.append({"name": f"criterion {num}: {title}", "passed": passed,
                           "residual": None if not worst or min(worst) == INF else min(worst),
                           "threshold": cfg.thr if worst else None})


COMMANDS = {
    "omega": cmd_omega,
    "period": cmd_period,
    "exp-coeffs": cmd_exp_coeffs,
    "sf": cmd_sf,
    "residue": cmd_residue,
    "filtration": cmd_filtration,
    "verify": cmd_verify,
}


def run(command, cfg):
    """Run one command and return its :class:`Report`."""
    cfg.validate()
    echo = {k: v for k, v in asdict(cfg).items()}
    P = cfg.field()
    echo.update(q=cfg.q, m=P.m, ram=P.r)
    echo["u"] = list(cfg.u)
    if isinstance(echo.get("lam"), list):
        echo["lam"] = "<vector>"
    rep = Report(command, echo)
    t0 = time.perf_counter()
    COMMANDS[command](cfg, rep)
    rep.timings[command] = round(time.perf_counter() - t0, 3)
    return rep


def _clean(x):
    """JSON-safe copy: ``inf`` (zero at precision) becomes null, ``-inf`` a string."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, float) and x in (INF, -INF):
        return None if x > 0 else "-inf"
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def build_parser():
    ap = argparse.ArgumentParser(prog="andersonsf", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--q", type=int, help="field size q (a prime power; the prime p with --p-exp)")
    ap.add_argument("--p-exp", type=int, dest="p_exp", help="exponent e with q = p^e; --q is then p")
    ap.add_argument("--m", type=int, help="degree of the digit field over F_q")
    ap.add_argument("--ram", type=int, help="ramification r (pi^r = 1/theta)")
    ap.add_argument("--prec", type=int, help="significant pi-digits P")
    ap.add_argument("--tdeg", type=int, help="degree cap D for disk expansions")
    ap.add_argument("--horizon", type=int, help="trusted Frobenius horizon I")
    ap.add_argument("--guard", type=int, help="guard band g beyond the horizon")
    ap.add_argument("--terms", type=int, help="product / series truncation count")
    ap.add_argument("--module", help="carlitz | carlitz_tensor:n | prolongation:k | direct_sum:a,b")
    ap.add_argument("--lambda", dest="lam", help="generator[:j] | period | JSON list of rendered numbers")
    ap.add_argument("--u", help="separating polynomial as F_q codes, low degree first, e.g. 0,1,1")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--threshold", type=int, help="pass margin in pi-digits (default prec/2)")
    ap.add_argument("--json", help="write the report as JSON to this path ('-' for stdout)")
    ap.add_argument("--config", help="JSON file with any of the options above")
    return ap


def config_from_args(args):
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: {exc}")
        if "lambda" in values:
            values["lam"] = values.pop("lambda")
        if "p-exp" in values:
            values["p_exp"] = values.pop("p-exp")
    for key in ("q", "p_exp", "m", "ram", "prec", "tdeg", "horizon", "guard", "terms", "module",
                "lam", "u", "seed", "threshold"):
        val = getattr(args, key)
        if val is not None:
            values[key] = val
    if isinstance(values.get("u"), str):
        try:
            values["u"] = tuple(int(x) for x in values["u"].split(","))
        except ValueError:
            raise ConfigError(f"u: cannot parse {values['u']!r} as comma-separated codes")
    elif "u" in values:
        values["u"] = tuple(values["u"])
    unknown = set(values) - set(RunConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**values)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep = run(args.command, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"precision shortfall: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    render_table(rep)
    if args.json:
        text = json.dumps(_clean(rep.to_json()), indent=1)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
