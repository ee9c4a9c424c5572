"""TOML experiment configs.

Grammar (all proxy parameters and preset names live here, not in code):

    [experiment]
    trials = 10000
    base_seed = 42
    analyzers = ["conditions", "limit_events", "transform_events"]
    agreement = ["e_limit", "e_liminf", "e_char", "e_qv_limsup"]  # optional

    [generator]
    family = "random_walk"            # random_walk | cox | one_shot
    horizon = 100000
    x_rule = "alt_harmonic"           # or a table: { name = "neg_geom", a = 2.0, base = 4.0 }
    p_rule = "pow2"
    # cox:   rate = "inv_sq", size = "identity", step = 0.05, with_bm = false
    # one_shot: kind = "two_point" | "pareto_exp", a, q, beta

    [params]                           # optional overrides of the defaults
    window = 0.1
    tol = 5e-3
    big = 5.0
    ...

The --seed CLI flag overrides base_seed.
"""

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .events import ProxyParams
from .generators import CoxSpec, OneShotSpec, RandomWalkSpec
from .montecarlo import ExperimentSpec
from .presets import PRule, RateRule, SizeRule, XRule


class ConfigError(ValueError):
    pass


def _rule(node, cls, what):
    if isinstance(node, str):
        return cls(node)
    if isinstance(node, dict):
        node = dict(node)
        try:
            name = node.pop("name")
        except KeyError:
            raise ConfigError(f"{what} table needs a 'name' key") from None
        return cls(name, node)
    raise ConfigError(f"{what} must be a preset name or a table")


def generator_from_dict(g: dict):
    try:
        family = g["family"]
    except KeyError:
        raise ConfigError("generator.family is required") from None
    if family == "random_walk":
        return RandomWalkSpec(
            _rule(g.get("x_rule", "zero"), XRule, "x_rule"),
            _rule(g.get("p_rule", "pow2"), PRule, "p_rule"),
            int(g.get("horizon", 1000)),
        )
    if family == "cox":
        return CoxSpec(
            _rule(g.get("rate", "inv_sq"), RateRule, "rate"),
            _rule(g.get("size", "identity"), SizeRule, "size"),
            float(g.get("horizon", 1000.0)),
            float(g.get("step", 0.05)),
            with_bm=bool(g.get("with_bm", False)),
            compensated=bool(g.get("compensated", True)),
        )
    if family == "one_shot":
        return OneShotSpec(
            kind=g.get("kind", "two_point"),
            a=float(g.get("a", 1.0)),
            q=float(g.get("q", 0.5)),
            beta=float(g.get("beta", 1.0)),
            horizon=int(g.get("horizon", 3)),
        )
    raise ConfigError(f"unknown generator family {family!r}")


def params_from_dict(d: dict) -> ProxyParams:
    allowed = set(ProxyParams.__dataclass_fields__)
    bad = set(d) - allowed
    if bad:
        raise ConfigError(f"unknown params keys: {sorted(bad)}")
    if "levels" in d:
        d = dict(d)
        d["levels"] = tuple(float(v) for v in d["levels"])
    try:
        return ProxyParams(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def experiment_from_dict(doc: dict, seed: int | None = None,
                         threads: int | None = None) -> ExperimentSpec:
    exp = doc.get("experiment", {})
    gen = doc.get("generator")
    if gen is None:
        raise ConfigError("a [generator] section is required")
    base_seed = exp.get("base_seed", 0) if seed is None else seed
    kw = {}
    if "analyzers" in exp:
        kw["analyzers"] = tuple(exp["analyzers"])
    if "agreement" in exp:
        kw["agreement"] = tuple(exp["agreement"])
    try:
        return ExperimentSpec(
            generator=generator_from_dict(gen),
            trials=int(exp.get("trials", 1000)),
            base_seed=int(base_seed),
            params=params_from_dict(doc.get("params", {})),
            threads=int(threads if threads is not None else exp.get("threads", 1)),
            **kw,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_experiment(path: str, seed: int | None = None,
                    threads: int | None = None) -> ExperimentSpec:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return experiment_from_dict(doc, seed, threads)
