"""Command line front end: classify, verify, orbits, compose, psi, field-info."""

from __future__ import annotations

import configparser
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .autgrp import AutError, aut_generators, enumerate_orbits, group_order
from .gfarith import DEFAULT_BOUND, FieldError, parse_field
from .lemmas import REGISTRY, run_check
from .projgeom import GeometryError
from .ratmap import RationalMapRep, compose_all, maps_equal
from .sarkisov import LinkError, psi_image
from .surfaces import DP6Model, hexagon_action, model_from_json


class UsageFailure(click.ClickException):
    """Invalid input; exits with status 2."""

    exit_code = 2


class Settings:
    def __init__(self, as_json: bool, field: str, threads: int, bound: int):
        self.as_json = as_json
        self.field = field
        self.threads = threads
        self.bound = bound


def _read_config(path: str | None) -> dict[str, str]:
    """key = value lines; a section header is optional."""
    if not path:
        return {}
    text = Path(path).read_text()
    parser = configparser.ConfigParser()
    try:
        parser.read_string("[ratsurf]\n" + text if not text.lstrip().startswith("[") else text)
    except configparser.Error as exc:
        raise UsageFailure(f"cannot parse config file: {exc}") from exc
    out: dict[str, str] = {}
    for section in parser.sections():
        out.update({k: v.strip().strip('"') for k, v in parser[section].items()})
    return out


def _emit(settings: Settings, payload, text_lines: list[str]) -> None:
    if settings.as_json:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageFailure(f"cannot read {path}: {exc}") from exc


def _load_model(path: str):
    data = _load_json(path)
    try:
        return model_from_json(data)
    except (GeometryError, FieldError, KeyError, TypeError) as exc:
        raise UsageFailure(f"invalid spec {path}: {exc}") from exc


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--json", "as_json", is_flag=True, default=None, help="Print JSON.")
@click.option("--field", default=None, help="Base field as q or p^n (default 2).")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads.")
@click.option("--bound", type=click.IntRange(min=2), default=None, help="Largest field order enumerated.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="key = value file providing defaults for the options above.")
@click.pass_context
def main(ctx, as_json, field, threads, bound, config_path):
    """Computations on rational surfaces over finite fields."""
    conf = _read_config(config_path)
    try:
        settings = Settings(
            as_json=as_json if as_json is not None else conf.get("json", "false").lower() in ("1", "true", "yes"),
            field=field or conf.get("field", "2"),
            threads=threads or int(conf.get("threads", 1)),
            bound=bound or int(conf.get("bound", DEFAULT_BOUND)),
        )
    except ValueError as exc:
        raise UsageFailure(f"invalid config value: {exc}") from exc
    ctx.obj = settings


def _field(settings: Settings):
    try:
        return parse_field(settings.field, settings.bound)
    except (FieldError, ValueError) as exc:
        raise UsageFailure(str(exc)) from exc


@main.command()
@click.argument("spec", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def classify(settings: Settings, spec: str):
    """Hexagon type of a degree 6 del Pezzo surface given as a JSON spec."""
    model = _load_model(spec)
    if not isinstance(model, DP6Model):
        raise UsageFailure("classify needs a degree 6 del Pezzo surface spec")
    action = hexagon_action(model)
    payload = {**action.to_json(), "rational_points": len(model.points())}
    try:
        gens = aut_generators(model)
        payload["aut_generators"] = gens.names()
        payload["aut_order"] = group_order(gens)
    except AutError:
        payload["aut_generators"] = None
        payload["aut_order"] = None
    lines = [f"type {payload['figure_type']}",
             f"Galois acts by {', '.join(payload['generators'])}",
             f"rational points: {payload['rational_points']}"]
    if payload["aut_order"] is not None:
        lines.append(f"|Aut_k(X)| = {payload['aut_order']}")
    _emit(settings, payload, lines)


@main.command()
@click.argument("lemma")
@click.option("--q", type=int, default=None, help="Field order for the group order checks.")
@click.option("--n", type=int, default=None, help="Hirzebruch index for linksF-factor.")
@click.option("--degrees", default=None, help="Comma separated base point degrees for linksF-factor.")
@click.option("--r", type=int, default=None, help="Number of links for linksQL-factor.")
@click.option("--timing", is_flag=True, help="Include run times (output is then not reproducible).")
@click.pass_obj
def verify(settings: Settings, lemma: str, q, n, degrees, r, timing):
    """Run a named check, or "all" of them."""
    ids = sorted(REGISTRY) if lemma == "all" else [lemma]
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        raise UsageFailure(f"unknown lemma id {unknown[0]!r}; known: {', '.join(sorted(REGISTRY))}")
    params: dict = {}
    if q is not None:
        params["q"] = q
    elif settings.field != "2":
        params["q"] = _field(settings).order
    if n is not None:
        params["n"] = n
    if degrees:
        try:
            params["degrees"] = [int(d) for d in degrees.split(",")]
        except ValueError as exc:
            raise UsageFailure(f"invalid degree list {degrees!r}") from exc
    if r is not None:
        params["r"] = r

    def run(i: str):
        return run_check(i, **params)
    try:
        if settings.threads > 1 and len(ids) > 1:
            with ThreadPoolExecutor(max_workers=settings.threads) as pool:
                reports = list(pool.map(run, ids))
        else:
            reports = [run(i) for i in ids]
    except (LinkError, FieldError, ValueError) as exc:
        raise UsageFailure(str(exc)) from exc
    payload = [rep.to_json(timing) for rep in reports]
    lines = [f"{rep.lemma}: {rep.status}" + (f" ({rep.seconds:.2f}s)" if timing else "") for rep in reports]
    _emit(settings, payload if len(payload) > 1 else payload[0], lines)
    if not all(rep.passed for rep in reports):
        sys.exit(1)


@main.command()
@click.argument("spec", type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", "m", type=click.IntRange(min=1), default=1, help="Extension degree to enumerate.")
@click.option("--threshold", type=click.IntRange(min=1), default=5, help="Largest orbit size reported.")
@click.pass_obj
def orbits(settings: Settings, spec: str, m: int, threshold: int):
    """Small orbits of the automorphism group and Frobenius on a model."""
    model = _load_model(spec)
    if model.point_field(m).order > settings.bound:
        raise UsageFailure(f"points over F{model.point_field(m).order} exceed the bound {settings.bound}")
    try:
        report = enumerate_orbits(aut_generators(model), m, threshold)
    except AutError as exc:
        raise UsageFailure(str(exc)) from exc
    lines = [f"{report.total_points} points, {len(report.orbits)} orbits with at most {threshold} points"]
    lines += [f"  {o.representative}  points={o.components}  degree={o.galois_degree}" for o in report.orbits]
    _emit(settings, report.to_json(), lines)


@main.command()
@click.argument("maps", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--equals", "other", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Compare the composition with this map.")
@click.pass_obj
def compose(settings: Settings, maps, other):
    """Compose rational maps given as JSON files: MAPS[0] o MAPS[1] o ..."""
    try:
        reps = [RationalMapRep.from_json(_load_json(p)) for p in maps]
        result = compose_all(reps)
        payload = {"map": result.to_json(), "formula": result.format()}
        lines = [result.format()]
        if other:
            same = maps_equal(result, RationalMapRep.from_json(_load_json(other)))
            payload["equal"] = same
            lines.append(f"equal: {same}")
    except (GeometryError, FieldError, KeyError, TypeError) as exc:
        raise UsageFailure(str(exc)) from exc
    _emit(settings, payload, lines)
    if other and not payload["equal"]:
        sys.exit(1)


@main.command()
@click.argument("degrees", nargs=-1, type=int)
@click.option("--label", default="default", help="Conic fibration class of the links.")
@click.pass_obj
def psi(settings: Settings, degrees, label):
    """Parity image of links with the given base point degrees."""
    try:
        vec = psi_image(degrees, label)
    except LinkError as exc:
        raise UsageFailure(str(exc)) from exc
    # the image is always printed as JSON
    click.echo(json.dumps(vec.to_json(), sort_keys=True, separators=(",", ":")) if not settings.as_json
               else json.dumps({"class": label, "psi": vec.to_json()}, indent=2, sort_keys=True))


def _monomial(c: int, i: int) -> str:
    mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
    if not mono:
        return str(c)
    return mono if c == 1 else f"{c}{mono}"


@main.command("field-info")
@click.pass_obj
def field_info(settings: Settings):
    """Order, modulus and subfields of the --field."""
    F = _field(settings)
    subfields = [d for d in range(1, F.n + 1) if F.n % d == 0]
    payload = {
        "p": F.p,
        "n": F.n,
        "order": F.order,
        "modulus": list(F.modulus),
        "primitive_element": F.format(F.primitive_of_subfield(F.n)),
        "subfield_degrees": subfields,
    }
    modulus = " + ".join(_monomial(c, i) for i, c in reversed(list(enumerate(F.modulus))) if c)
    lines = [f"F{F.order} = F{F.p}[t]/({modulus})",
             f"primitive element: {payload['primitive_element']}",
             f"subfields: {', '.join(f'F{F.p ** d}' for d in subfields)}"]
    _emit(settings, payload, lines)


if __name__ == "__main__":  # pragma: no cover
    main()
