"""Job loading, validation, execution and golden-expectation checking."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .analyzer import (
    AnalyzerError,
    default_gamma,
    flop_destabilize,
    maeda_destabilize,
    slope_destabilize,
    theorem_check,
)
from .catalog import BuiltSurface, CatalogError, build_surface, get_entry
from .dnc import DNCConfig, DNCError, slope_verdict
from .flop import FlopError, FlopSpec
from .mpoly import MPoly, MPolyError, parse_fraction, parse_poly
from .report import atomic_write, canonical_json_bytes, grid_csv, report_document
from .stability import Verdict
from .surface import SurfaceError
from .roots import IntervalError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3

CONFIG_ERRORS = (AnalyzerError, CatalogError, DNCError, FlopError,
                 SurfaceError, MPolyError, IntervalError)


class JobParseError(ValueError):
    """Schema violation or unreadable job file; carries JSON-pointer paths."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


def load_schema() -> dict:
    text = (resources.files("flopslope") / "data" / "schema" / "job.schema.json").read_text()
    return json.loads(text)


def _pointer(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def validate_job(doc) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (_pointer(e), e.message))
    if errors:
        raise JobParseError([f"{_pointer(e)}: {e.message}" for e in errors])


def load_job(path: Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise JobParseError([f"/: {exc}"]) from None
    validate_job(doc)
    return doc


@dataclass
class JobContext:
    doc: dict
    built: BuiltSurface
    z_is_boundary: bool
    flop_spec: FlopSpec | None
    c_rule: MPoly | str | None
    gamma: Fraction | None
    beta: dict


def _parse_c_rule(value):
    if value is None or value == "epsilon":
        return value
    return parse_poly(value)


def prepare_job(doc: dict, gamma_override: str | None = None,
                dprime_override: str | None = None) -> JobContext:
    surface_spec = doc["surface"]
    if "catalog" in surface_spec:
        entry = get_entry(surface_spec["catalog"])
        spec = dict(entry.surface_spec)
        if "boundary" in surface_spec:
            spec["boundary"] = surface_spec["boundary"]
    else:
        spec = dict(surface_spec)

    z_final_class = None
    if "z" in doc and isinstance(doc["z"], dict) and "class" in doc["z"]:
        # top-level class vectors address the final lattice
        z_final_class = doc["z"]
        spec.pop("z", None)
    elif doc.get("z", spec.get("z")) is not None:
        spec["z"] = doc.get("z", spec.get("z"))

    built = build_surface(spec)
    z = built.z
    z_is_boundary = built.z_is_boundary
    if z_final_class is not None:
        z = built.pair.lattice.divisor([parse_fraction(str(x)) for x in z_final_class["class"]])
        z_is_boundary = z == built.pair.boundary
    if z is None:
        z = built.pair.boundary
        z_is_boundary = True
    built = BuiltSurface(built.pair, built.blowup, z, z_is_boundary)

    flop_spec = None
    if doc.get("pipeline") == "flop" or "flop" in doc:
        fdoc = doc.get("flop", {})
        prov = built.pair.provenance
        if prov is None:
            raise AnalyzerError("flop pipeline requires a blown-up surface")
        curves = fdoc.get("curves", "all")
        r = prov.r if curves == "all" else int(curves)
        deltas = tuple(parse_poly(d) for d in fdoc.get("deltas", ()))
        dprime = fdoc.get("d_prime_dot_ci")
        if dprime_override:
            dprime = [int(x) for x in dprime_override.split(",")]
        if dprime is not None:
            dprime = tuple(Fraction(int(x)) for x in dprime)
        flop_spec = FlopSpec(r, deltas, prov.points[:r], dprime)

    gamma = None
    if gamma_override is not None:
        gamma = parse_fraction(gamma_override)
    elif "gamma" in doc:
        gamma = parse_fraction(doc["gamma"])

    return JobContext(
        doc=doc,
        built=built,
        z_is_boundary=z_is_boundary,
        flop_spec=flop_spec,
        c_rule=_parse_c_rule(doc.get("c_rule")),
        gamma=gamma,
        beta=doc.get("beta", {"mode": "symbolic"}),
    )


def execute(ctx: JobContext):
    """Run the pipeline; returns (StabilityReport, csv_text or None)."""
    pair = ctx.built.pair
    z = ctx.built.z
    pipeline = ctx.doc["pipeline"]
    beta = ctx.beta

    if pipeline == "slope":
        if beta.get("mode") == "rational":
            config = DNCConfig.standard(pair, z=None if ctx.z_is_boundary else z)
            report = slope_verdict(config, parse_fraction(beta["value"]))
        else:
            rule = None if ctx.c_rule in (None, "epsilon") else ctx.c_rule
            report = slope_destabilize(pair, z=None if ctx.z_is_boundary else z, c_rule=rule)
    elif pipeline == "flop":
        rule = ctx.c_rule
        report = flop_destabilize(pair, ctx.gamma,
                                  z=None if ctx.z_is_boundary else z,
                                  flop_spec=ctx.flop_spec,
                                  c_rule=rule if isinstance(rule, (MPoly, str)) else None)
    elif pipeline == "maeda":
        gamma = ctx.gamma if ctx.gamma is not None else default_gamma(pair)
        report = maeda_destabilize(pair, gamma)
    elif pipeline == "theorem":
        report = theorem_check(pair, ctx.gamma)
    else:  # pragma: no cover - schema forbids
        raise AnalyzerError(f"unknown pipeline {pipeline!r}")

    csv_text = None
    if beta.get("mode") == "grid" and report.futaki_after_rule is not None:
        csv_text = grid_csv(report.futaki_after_rule,
                            parse_fraction(beta["lo"]),
                            parse_fraction(beta["hi"]),
                            parse_fraction(beta["step"]))
    if beta.get("mode") == "rational" and report.futaki_after_rule is not None \
            and pipeline != "slope":
        point = parse_fraction(beta["value"])
        f = report.futaki_after_rule
        value = f.eval({"b": point}) if "b" in f.variables else f.constant_value()
        extras = dict(report.extras)
        extras["value_at_beta"] = str(value)
        report = dataclasses.replace(report, extras=extras)
    return report, csv_text


def run_job_file(path: Path, out_dir: Path, gamma: str | None = None,
                 grid: str | None = None, dprime: str | None = None):
    """Run one job file; returns (exit_code, messages, written files)."""
    messages: list[str] = []
    files: list[Path] = []
    try:
        doc = load_job(path)
    except JobParseError as exc:
        return EXIT_PARSE, [f"parse error: {m}" for m in exc.messages], files
    if grid:
        lo, hi, step = grid.split(":")
        doc = dict(doc)
        doc["beta"] = {"mode": "grid", "lo": lo, "hi": hi, "step": step}
        validate_job(doc)
    try:
        ctx = prepare_job(doc, gamma_override=gamma, dprime_override=dprime)
        report, csv_text = execute(ctx)
    except CONFIG_ERRORS as exc:
        return EXIT_INVALID, [f"invalid configuration: {exc}"], files

    document = report_document(doc, report.to_json())
    out_path = Path(out_dir) / f"{doc['name']}.json"
    atomic_write(out_path, canonical_json_bytes(document))
    files.append(out_path)
    if csv_text is not None:
        csv_path = Path(out_dir) / f"{doc['name']}.csv"
        atomic_write(csv_path, csv_text.encode("utf-8"))
        files.append(csv_path)
    messages.append(f"{doc['name']}: verdict {report.verdict.value}")
    code = EXIT_INVALID if report.verdict is Verdict.INVALID_CONFIG else EXIT_OK
    return code, messages, files


def resolve_pointer(doc, pointer: str):
    if pointer in ("", "/"):
        return doc
    node = doc
    for raw in pointer.lstrip("/").split("/"):
        key = raw.replace("~1", "/").replace("~0", "~")
        if isinstance(node, list):
            node = node[int(key)]
        elif isinstance(node, dict):
            node = node[key]
        else:
            raise KeyError(pointer)
    return node


def check_expectations(doc: dict, document: dict):
    """Evaluate the job's golden expectations against its report document.
    Returns a list of (pointer, ok, detail) triples."""
    results = []
    for item in doc.get("expect", ()):
        pointer = item["path"]
        try:
            got = resolve_pointer(document, pointer)
        except (KeyError, IndexError, ValueError):
            results.append((pointer, False, "path not found"))
            continue
        if "equals" in item:
            ok = got == item["equals"]
            detail = f"got {got!r}, want {item['equals']!r}"
        elif "approx" in item:
            text = got
            if isinstance(text, str) and text.startswith("≈"):
                text = text[1:]
            try:
                value = Fraction(text)
            except (ValueError, TypeError):
                results.append((pointer, False, f"not numeric: {got!r}"))
                continue
            target = Fraction(item["approx"])
            tol = parse_fraction(item.get("tol", "1/1000000"))
            ok = abs(value - target) <= tol
            detail = f"got {got!r}, want {item['approx']} +- {item.get('tol', '1/1000000')}"
        else:
            ok = got is not None
            detail = f"got {got!r}"
        results.append((pointer, ok, detail))
    return results


def bundled_job_paths() -> list[Path]:
    base = resources.files("flopslope") / "data" / "jobs"
    return sorted(Path(str(base)).glob("*.json"))
