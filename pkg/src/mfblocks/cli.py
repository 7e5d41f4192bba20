"""Command line front end.

Four subcommands: mf numbers (closed form or construction recipe),
the named-check verification suites, Ext-quiver export, and parameter
recovery from the commutation pairing.  Output is JSON throughout;
verify streams one object per check so long suites stay tail-able.
"""

import json
import sys
from typing import Optional

import click

from .characters import is_faithful, make_char
from .groups import Params, params_make
from .morita import (
    commutation_pairing, ext_dim, mf_number, pairing_to_json,
    params_for_target, recover_theta, simple_str, simples,
)
from .verify import run_checks


def _load_config(path: Optional[str]) -> dict:
    """key=value lines; blank lines and # comments ignored."""
    if path is None:
        return {}
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.ClickException(
                    f"{path}:{ln}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            cfg[key.strip()] = value.strip()
    return cfg


def _resolve(cfg: dict, name: str, flag, cast=int, default=None):
    """Explicit flag wins, then the config file, then the default."""
    if flag is not None:
        return flag
    if name in cfg:
        try:
            return cast(cfg[name])
        except ValueError as err:
            raise click.ClickException(f"config {name}: {err}")
    return default


def _require(value, name: str):
    if value is None:
        raise click.UsageError(f"missing required parameter --{name}")
    return value


def _build(ell: int, p: int, r: int) -> Params:
    try:
        return params_make(ell, p, r)
    except ValueError as err:
        raise click.ClickException(str(err))


def _theta(P: Params, j: int):
    try:
        theta = make_char(P, "Z", j)
    except ValueError as err:
        raise click.ClickException(str(err))
    if not is_faithful(theta):
        raise click.ClickException(
            f"theta exponent {j} is not faithful mod r={P.r}")
    return theta


_CONFIG = click.option(
    "--config", "config_path", type=click.Path(exists=True, dir_okay=False),
    default=None, help="key=value file supplying any omitted flags")


@click.group()
def main() -> None:
    """Exact block invariants for the two-parameter family."""


@main.command()
@click.option("--ell", type=int, default=None, help="the characteristic")
@click.option("--n", "n_", type=int, default=None,
              help="target mf number (construction recipe mode)")
@click.option("--r", "r_", type=int, default=None,
              help="inertial order (direct mode)")
@_CONFIG
def mf(ell: Optional[int], n_: Optional[int], r_: Optional[int],
       config_path: Optional[str]) -> None:
    """Morita-Frobenius number: closed form, or the recipe for a target."""
    cfg = _load_config(config_path)
    ell = _require(_resolve(cfg, "ell", ell), "ell")
    # The config is only consulted when neither mode flag is explicit,
    # so a file shared with the other subcommands (which all take r)
    # does not poison recipe mode.
    if n_ is None and r_ is None:
        n_ = _resolve(cfg, "n", None)
        r_ = _resolve(cfg, "r", None) if n_ is None else None
    if (n_ is None) == (r_ is None):
        raise click.UsageError("exactly one of --n and --r is required")
    try:
        if n_ is not None:
            r, p = params_for_target(ell, n_)
            out = {"ell": ell, "n": n_, "r": r, "p": p,
                   "mf": mf_number(ell, r)}
        else:
            out = {"ell": ell, "r": r_, "mf": mf_number(ell, r_)}
    except (ValueError, RuntimeError) as err:
        raise click.ClickException(str(err))
    click.echo(json.dumps(out))


@main.command()
@click.option("--ell", type=int, default=None)
@click.option("--p", "p_", type=int, default=None)
@click.option("--r", "r_", type=int, default=None)
@click.option("--theta", "theta_e", type=int, default=None,
              help="exponent j of the block character (default 1)")
@click.option("--suite", type=click.Choice(("quick", "full")), default=None)
@click.option("--seed", type=int, default=None,
              help="sampling seed (default 0)")
@_CONFIG
def verify(ell, p_, r_, theta_e, suite, seed, config_path) -> None:
    """Run the named checks; one JSON line each, exit 0 iff all pass."""
    cfg = _load_config(config_path)
    P = _build(_require(_resolve(cfg, "ell", ell), "ell"),
               _require(_resolve(cfg, "p", p_), "p"),
               _require(_resolve(cfg, "r", r_), "r"))
    theta = _theta(P, _resolve(cfg, "theta", theta_e, default=1))
    suite = _resolve(cfg, "suite", suite, cast=str, default="quick")
    if suite not in ("quick", "full"):
        raise click.UsageError(f"suite must be quick or full, got {suite}")
    seed = _resolve(cfg, "seed", seed, default=0)
    report = run_checks(P, theta, suite=suite, seed=seed,
                        emit=lambda row: click.echo(json.dumps(row)))
    sys.exit(0 if report.passed else 1)


@main.command()
@click.option("--ell", type=int, default=None)
@click.option("--p", "p_", type=int, default=None)
@click.option("--r", "r_", type=int, default=None)
@click.option("--theta", "theta_e", type=int, default=None)
@click.option("--out", "fmt", type=click.Choice(("dot", "json")),
              default=None, help="output format (default dot)")
@click.option("--output", "dest", type=click.Path(dir_okay=False),
              default=None, help="write here instead of stdout")
@_CONFIG
def quiver(ell, p_, r_, theta_e, fmt, dest, config_path) -> None:
    """Ext quiver with multiplicities, as DOT or JSON."""
    cfg = _load_config(config_path)
    P = _build(_require(_resolve(cfg, "ell", ell), "ell"),
               _require(_resolve(cfg, "p", p_), "p"),
               _require(_resolve(cfg, "r", r_), "r"))
    theta = _theta(P, _resolve(cfg, "theta", theta_e, default=1))
    fmt = _resolve(cfg, "out", fmt, cast=str, default="dot")
    if fmt not in ("dot", "json"):
        raise click.UsageError(f"out must be dot or json, got {fmt}")
    labs = [s for s, _ in simples(P, theta)]
    names = [simple_str(s) for s in labs]
    matrix = [[ext_dim(P, theta, a, b) for b in labs] for a in labs]
    if fmt == "json":
        text = json.dumps({
            "params": {"ell": P.ell, "p": P.p, "r": P.r, "theta": theta.e},
            "vertices": names, "matrix": matrix}) + "\n"
    else:
        lines = ["digraph ext_quiver {"]
        for i, name in enumerate(names):
            lines.append(f'  v{i} [label="{name}"];')
        for i in range(len(labs)):
            for j in range(len(labs)):
                if matrix[i][j]:
                    lines.append(f'  v{i} -> v{j} [label="{matrix[i][j]}"];')
        lines.append("}")
        text = "\n".join(lines) + "\n"
    if dest is None:
        click.echo(text, nl=False)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


@main.command()
@click.option("--ell", type=int, default=None)
@click.option("--p", "p_", type=int, default=None)
@click.option("--r", "r_", type=int, default=None)
@click.option("--theta", "theta_e", type=int, default=None)
@_CONFIG
def recover(ell, p_, r_, theta_e, config_path) -> None:
    """Commutation pairing table and the recovered exponent set."""
    cfg = _load_config(config_path)
    P = _build(_require(_resolve(cfg, "ell", ell), "ell"),
               _require(_resolve(cfg, "p", p_), "p"),
               _require(_resolve(cfg, "r", r_), "r"))
    theta = _theta(P, _resolve(cfg, "theta", theta_e, default=1))
    table = commutation_pairing(P, theta)
    out = {"params": {"ell": P.ell, "p": P.p, "r": P.r, "theta": theta.e},
           "pairing": pairing_to_json(table),
           "recovered": sorted(recover_theta(table, P))}
    click.echo(json.dumps(out))


if __name__ == "__main__":
    main()
