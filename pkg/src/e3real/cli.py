"""Command-line front end: ``simulate``, ``verify`` and ``list-scenarios``.

Exit codes: 0 success, 1 a gating check failed, 2 usage or configuration
error, 3 integration failure or early termination.
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .dynamics import METHODS, IntegratorConfig, integrate
from .errors import DomainError, E3RealError, IntegrationError, UsageError, ValidationError
from .reduced import check_embedded, embedded_from_moser
from .scenarios import (
    REALIZATIONS,
    SCENARIOS,
    build_flow,
    build_system,
    embedded_from_e3,
    monopole_from_e3,
    sphere_from_e3,
    twistor_from_e3,
)
from .twistor import TwistorState
from .verify import SUITES, SuiteConfig, run_suite

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

PARAM_KEYS = ("inertia", "lambda", "I", "chi1", "chi2", "chi", "eps", "V", "W")
VECTOR_PARAMS = ("inertia", "lambda", "chi")
INITIAL_KEYS = ("J", "Gamma", "theta", "zeta", "p", "y", "state")
INTEGRATOR_KEYS = ("method", "dt", "t_max", "rtol", "atol", "projection", "record_stride")

# Columns named after the e(3)* invariants come first, in this order.
INVARIANT_ORDER = ("K1", "K2", "H", "K_extra", "J0", "Gamma0", "Gamma0_tilde", "J0_tilde",
                   "norm_residual", "tangency_residual")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class ScenarioConfig:
    scenario: str
    realization: str = "e3"
    params: dict = field(default_factory=dict)
    mu: Optional[float] = None
    nu: Optional[float] = None
    initial: dict = field(default_factory=dict)
    from_e3: bool = False
    integrator: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})

    def integrator_config(self):
        return IntegratorConfig(**self.integrator)


def _floats(text, name):
    try:
        return [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError:
        raise ValidationError(f"{name}: expected comma-separated numbers, got {text!r}") from None


def _vector_section(section, name, keys):
    """A section holding either ``values = [...]`` or one key per component."""
    if not isinstance(section, dict):
        raise ValidationError(f"[{name}] must be a table")
    if "values" in section:
        return [float(v) for v in section["values"]]
    present = [k for k in keys if k in section]
    if present and len(present) != len(keys):
        raise ValidationError(f"[{name}] needs all of {', '.join(keys)}")
    return [float(section[k]) for k in keys] if present else None


def load_config_file(path):
    """Parse a TOML config into a flat dict of ScenarioConfig fields."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"config {path} is not valid TOML: {exc}") from None
    known = {"scenario", "realization", "mu", "nu", "seed", "from_e3",
             "inertia", "lambda", "potential", "initial", "integrator"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    out = {k: raw[k] for k in ("scenario", "realization", "mu", "nu", "seed", "from_e3") if k in raw}
    params = {}
    if "inertia" in raw:
        sec = raw["inertia"]
        if isinstance(sec, dict) and "I" in sec:
            params["I"] = float(sec["I"])
        vec = _vector_section(sec, "inertia", ("I1", "I2", "I3"))
        if vec is not None:
            params["inertia"] = vec
    if "lambda" in raw:
        vec = _vector_section(raw["lambda"], "lambda", ("l1", "l2", "l3"))
        if vec is not None:
            params["lambda"] = vec
    for k, v in raw.get("potential", {}).items():
        if k not in ("chi1", "chi2", "chi", "eps", "V", "W"):
            raise ValidationError(f"unknown [potential] key {k!r}")
        params[k] = [float(x) for x in v] if k == "chi" else float(v)
    out["params"] = params
    initial = {}
    for k, v in raw.get("initial", {}).items():
        if k not in INITIAL_KEYS:
            raise ValidationError(f"unknown [initial] key {k!r}")
        initial[k] = [float(x) for x in v]
    out["initial"] = initial
    integ = {}
    for k, v in raw.get("integrator", {}).items():
        if k not in INTEGRATOR_KEYS:
            raise ValidationError(f"unknown [integrator] key {k!r}")
        integ[k] = v
    out["integrator"] = integ
    return out


def config_from_args(args):
    """Merge the config file (if any) with command-line flags; flags win."""
    base = load_config_file(args.config) if args.config else {}
    params = dict(base.get("params", {}))
    for key in PARAM_KEYS:
        v = getattr(args, "p_" + key)
        if v is not None:
            params[key] = _floats(v, "--" + key) if key in VECTOR_PARAMS else float(v)
    initial = dict(base.get("initial", {}))
    for key in INITIAL_KEYS:
        v = getattr(args, "init_" + key)
        if v is not None:
            initial[key] = _floats(v, f"--initial-{key}")
    integ = dict(base.get("integrator", {}))
    for key in INTEGRATOR_KEYS:
        v = getattr(args, key)
        if v is not None:
            integ[key] = v
    scenario = args.scenario or base.get("scenario")
    if scenario is None:
        raise ValidationError("a scenario is required (--scenario or 'scenario' in the config)")
    realization = args.realization or base.get("realization", "e3")
    mu = args.mu if args.mu is not None else base.get("mu")
    nu = args.nu if args.nu is not None else base.get("nu")
    seed = resolve_seed(args.seed if args.seed is not None else base.get("seed"))
    cfg = ScenarioConfig(
        scenario=scenario,
        realization=realization,
        params=params,
        mu=None if mu is None else float(mu),
        nu=None if nu is None else float(nu),
        initial=initial,
        from_e3=bool(args.from_e3 or base.get("from_e3", False)),
        integrator=integ,
        seed=seed,
    )
    validate_config(cfg)
    return cfg


def resolve_seed(seed):
    if seed is not None:
        return int(seed)
    env = os.environ.get("E3REAL_SEED")
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"E3REAL_SEED must be an integer, got {env!r}") from None


def validate_config(cfg):
    if cfg.scenario not in SCENARIOS:
        raise UsageError(f"unknown scenario {cfg.scenario!r}; expected one of {sorted(SCENARIOS)}")
    if cfg.realization not in REALIZATIONS:
        raise UsageError(f"unknown realization {cfg.realization!r}; expected one of {REALIZATIONS}")
    info = SCENARIOS[cfg.scenario]
    allowed = set(info.required) | set(info.optional)
    extra = sorted(k for k in cfg.params if k not in allowed)
    if extra:
        raise ValidationError(f"scenario {cfg.scenario} does not take {', '.join(extra)}")
    cfg.integrator_config()


# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------


def _need(initial, key, n, realization):
    if key not in initial:
        raise ValidationError(f"realization {realization} needs initial {key}")
    v = np.asarray(initial[key], dtype=float)
    if v.shape != (n,) or not np.all(np.isfinite(v)):
        raise ValidationError(f"initial {key} must have {n} finite components")
    return v


def _complex2(v):
    return np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])


def initial_state(cfg):
    """Flat chart state plus the (mu, nu) levels actually used."""
    r, ini = cfg.realization, cfg.initial
    mu, nu = cfg.mu, cfg.nu
    if cfg.from_e3 or r == "e3":
        J = _need(ini, "J", 3, r)
        G = _need(ini, "Gamma", 3, r)
        if r == "e3":
            return np.concatenate([J, G]), mu, nu
        if np.linalg.norm(G) <= 1e-8:
            raise DomainError("--from-e3 needs Gamma != 0")
        if r == "twistor":
            return twistor_from_e3(J, G).as_real(), mu, nu
        if r == "monopole":
            m, p, y = monopole_from_e3(J, G)
            _check_level("mu", mu, m)
            return np.concatenate([p, y]), m, nu
        if r == "sphere":
            n_, y, p = sphere_from_e3(J, G)
            _check_level("nu", nu, n_)
            return np.concatenate([y, p]), mu, n_
        n_, x8 = embedded_from_e3(J, G)
        _check_level("nu", nu, n_)
        return x8, mu, n_
    if r == "twistor":
        if "state" in ini:
            x = _need(ini, "state", 8, r)
        else:
            x = TwistorState(_complex2(_need(ini, "theta", 4, r)),
                             _complex2(_need(ini, "zeta", 4, r))).as_real()
        if np.linalg.norm(x[:4]) <= 1e-8:
            raise DomainError("initial zeta must be nonzero (twistor space is punctured at zeta = 0)")
        return x, mu, nu
    if r == "monopole":
        if mu is None:
            raise ValidationError("monopole realization needs --mu")
        p, y = _need(ini, "p", 3, r), _need(ini, "y", 3, r)
        if np.linalg.norm(y) <= 1e-8:
            raise DomainError("initial y must be nonzero")
        return np.concatenate([p, y]), mu, nu
    if nu is None or not nu < 0:
        raise ValidationError("sphere realizations need --nu < 0")
    rho = np.sqrt(-2.0 * nu)
    if r == "sphere":
        return np.concatenate([_need(ini, "y", 3, r), _need(ini, "p", 3, r)]), mu, nu
    if "state" in ini:
        x = _need(ini, "state", 8, r)
        check_embedded(x, rho)
    else:
        x = embedded_from_moser(_need(ini, "y", 3, r), _need(ini, "p", 3, r), rho)
    return x, mu, nu


def _check_level(name, given, solved, tol=1e-9):
    if given is not None and abs(given - solved) > tol * max(1.0, abs(solved)):
        raise ValidationError(f"--{name} {given} disagrees with the level {solved:.17g} of the given (J, Gamma)")


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    return format(float(v), ".17g")


def trajectory_csv(traj, labels):
    header = ["t", *labels, *traj.invariant_names]
    lines = [",".join(header)]
    for t, x, inv in zip(traj.times, traj.states, traj.invariants):
        lines.append(",".join(_fmt(v) for v in (t, *x, *inv)))
    return "\n".join(lines) + "\n"


def _order_invariants(invariants):
    rank = {n: i for i, n in enumerate(INVARIANT_ORDER)}
    return sorted(invariants, key=lambda item: rank.get(item[0], len(rank)))


def run_simulation(cfg):
    """Integrate a configured scenario; returns (traj, report, labels, levels)."""
    system = build_system(cfg.scenario, cfg.params)
    x0, mu, nu = initial_state(cfg)
    realized = build_flow(system, cfg.realization, mu=mu, nu=nu)
    traj, report = integrate(realized.flow, x0, cfg.integrator_config(),
                             _order_invariants(realized.invariants))
    return traj, report, realized.chart_labels, {"mu": mu, "nu": nu}


def drift_json(cfg, report, levels):
    drift = report.as_dict()
    drift.pop("wall_time")  # keeps repeated runs byte-identical
    payload = {
        "metadata": {"version": __version__, "seed": cfg.seed, "config": cfg.to_dict(),
                     "levels": levels},
        "drift": drift,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _default_report_path(out):
    stem, _ = os.path.splitext(out)
    return stem + ".drift.json"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_simulate(args):
    cfg = config_from_args(args)
    traj, report, labels, levels = run_simulation(cfg)
    csv_text = trajectory_csv(traj, labels)
    report_text = drift_json(cfg, report, levels)
    if args.out:
        atomic_write(args.out, csv_text)
        atomic_write(args.report or _default_report_path(args.out), report_text)
    else:
        sys.stdout.write(csv_text)
        if args.report:
            atomic_write(args.report, report_text)
    sys.stderr.write(f"{len(traj)} samples, wall time {report.wall_time:.3f} s\n")
    if traj.terminated_early:
        sys.stderr.write(f"error: {traj.message}\n")
        return EXIT_RUNTIME
    return EXIT_OK


def _parse_tol_overrides(items):
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--tol-check expects NAME=VALUE, got {item!r}")
        out[name.strip()] = float(value)
    return out


def cmd_verify(args):
    cfg = SuiteConfig(
        suite=args.suite,
        samples=args.samples,
        seed=resolve_seed(args.seed),
        tol=_parse_tol_overrides(args.tol_check),
        global_tol=args.tol,
    )
    report = run_suite(cfg)
    text = report.to_json()
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    failed = [r.check for r in report.results if r.gating and not r.passed]
    for name in failed:
        sys.stderr.write(f"FAIL {name}\n")
    sys.stderr.write(f"{len(report.results)} checks, {len(failed)} gating failures\n")
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_list_scenarios(args):
    for name, info in SCENARIOS.items():
        req = ", ".join(info.required) or "-"
        opt = ", ".join(info.optional) or "-"
        sys.stdout.write(f"{name}: requires {req}; optional {opt}; {info.case}\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser():
    parser = _Parser(prog="e3real", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sim = sub.add_parser("simulate", help="integrate a scenario and write a CSV trajectory")
    sim.add_argument("--config", help="TOML file with [inertia], [lambda], [potential], [initial], [integrator]")
    sim.add_argument("--scenario", choices=sorted(SCENARIOS))
    sim.add_argument("--realization", choices=REALIZATIONS)
    for key in PARAM_KEYS:
        sim.add_argument(f"--{key}", dest="p_" + key,
                         help="comma-separated vector" if key in VECTOR_PARAMS else None)
    sim.add_argument("--mu", type=float, help="monopole level")
    sim.add_argument("--nu", type=float, help="sphere level (negative)")
    for key in INITIAL_KEYS:
        sim.add_argument(f"--initial-{key}", dest="init_" + key,
                         help="theta/zeta as re1,im1,re2,im2" if key in ("theta", "zeta") else None)
    sim.add_argument("--from-e3", action="store_true",
                     help="solve for a fibre point over --initial-J/--initial-Gamma")
    sim.add_argument("--method", choices=METHODS)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--t-max", dest="t_max", type=float)
    sim.add_argument("--rtol", type=float)
    sim.add_argument("--atol", type=float)
    sim.add_argument("--projection", action="store_const", const=True, default=None)
    sim.add_argument("--record-stride", dest="record_stride", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="CSV path (stdout when omitted)")
    sim.add_argument("--report", help="drift report path (default: next to --out)")
    sim.set_defaults(func=cmd_simulate)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=SUITES + ("all",))
    ver.add_argument("--samples", type=int, default=100)
    ver.add_argument("--seed", type=int)
    ver.add_argument("--tol", type=float, help="threshold applied to every check")
    ver.add_argument("--tol-check", action="append", metavar="NAME=VALUE",
                     help="threshold for one check or suite (repeatable)")
    ver.add_argument("--out", help="JSON path (stdout when omitted)")
    ver.set_defaults(func=cmd_verify)

    lst = sub.add_parser("list-scenarios", help="print scenarios and their parameters")
    lst.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IntegrationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME
    except (ValidationError, DomainError, UsageError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except E3RealError as exc:  # pragma: no cover - every subclass is handled above
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
