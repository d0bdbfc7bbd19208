"""Command-line client for the basestock service.

The CLI is a thin HTTP client: every command talks to the service API.  By
default it mounts the application in-process (no server needed); pass
``--server URL`` to target a running instance instead.  Exit codes: 0
success, 1 file/validation problems, 2 optimizer failures.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click
import httpx
import yaml

from .simulator import TRACE_COLUMNS


class _InProcessTransport(httpx.BaseTransport):
    """Sync bridge onto the ASGI app, so the CLI stays a pure HTTP client
    even when no server is running."""

    def __init__(self, app) -> None:
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        async def call():
            response = await self._asgi.handle_async_request(request)
            body = await response.aread()
            return response.status_code, response.headers, body

        status, headers, body = asyncio.run(call())
        return httpx.Response(status_code=status, headers=headers, content=body, request=request)


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from .service import app

    return httpx.Client(transport=_InProcessTransport(app), base_url="http://service", timeout=None)


def _load_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except FileNotFoundError:
        raise click.ClickException(f"no such file: {path}")
    except yaml.YAMLError as exc:
        raise click.ClickException(f"{path}: {exc}")
    if not isinstance(doc, dict):
        raise click.ClickException(f"{path}: instance document must be a mapping")
    return doc


def _fail(response: httpx.Response) -> None:
    try:
        detail = response.json()["detail"]
        kind, message = detail.get("kind", "error"), detail.get("message", "")
    except Exception:
        kind, message = "error", response.text
    click.echo(f"{kind}: {message}", err=True)
    sys.exit(2 if kind == "optimizer" else 1)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        _fail(response)
    return response.json()


def _parse_ouls(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise click.ClickException(f"could not parse order-up-to levels: {text!r}")


@click.group()
@click.option("--server", default=None, help="Service URL; default runs the app in-process.")
@click.pass_context
def main(ctx, server):
    """Simulate and optimize order-up-to levels for supply-chain networks."""
    ctx.obj = server


@main.command()
@click.argument("path", type=click.Path())
@click.pass_obj
def validate(server, path):
    """Validate an instance file and print its canonical structure."""
    doc = _load_doc(path)
    with _client(server) as client:
        out = _post(client, "/validate", {"instance": doc})
    click.echo(f"ordering: {out['ordering']}")
    edges = [tuple(e) for e in out["decision_edges"]]
    click.echo(f"{len(edges)} decision edges: {edges}")
    click.echo(f"horizon: {out['horizon']}")
    click.echo("priming levels: " + ", ".join(f"{k}={v:.3f}" for k, v in out["priming_levels"].items()))
    click.echo("init levels:    " + ", ".join(f"{k}={v:.3f}" for k, v in out["init_levels"].items()))


@main.command()
@click.argument("path", type=click.Path())
@click.option("--ouls", required=True, help="Comma-separated levels in decision-edge order.")
@click.option("--trials", default=10, show_default=True)
@click.option("--horizon", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--trace", "trace_path", type=click.Path(), default=None, help="Write a per-period trace CSV.")
@click.option(
    "--allow-negative-orders",
    is_flag=True,
    default=False,
    help="Sensitivity switch: skip the order clamp (orders may be negative).",
)
@click.pass_obj
def simulate(server, path, ouls, trials, horizon, seed, trace_path, allow_negative_orders):
    """Evaluate fixed order-up-to levels by simulation."""
    doc = _load_doc(path)
    payload = {
        "instance": doc,
        "ouls": _parse_ouls(ouls),
        "trials": trials,
        "horizon": horizon,
        "seed": seed,
        "include_trace": trace_path is not None,
        "allow_negative_orders": allow_negative_orders,
    }
    with _client(server) as client:
        out = _post(client, "/simulate", payload)
    click.echo(
        f"cost/period: {out['mean_cost_per_period']:.4f} +- {out['std_across_trials']:.4f} "
        f"({trials} trials x {horizon} periods, warm-up {out['warmup']})"
    )
    click.echo(
        f"episode cost (T={out['episode_horizon']}, instance init): {out['mean_episode_cost']:.4f}"
    )
    if trace_path:
        with open(trace_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=TRACE_COLUMNS)
            writer.writeheader()
            writer.writerows(out["trace"])
        click.echo(f"trace written to {trace_path}")


METHODS = ["adam", "adam-restart", "mlp", "dfo", "cd", "enum", "random"]


@main.command()
@click.argument("path", type=click.Path())
@click.option("--method", type=click.Choice(METHODS), default="adam", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--episodes", default=None, type=int, help="Training episode budget (adam/mlp).")
@click.option("--learning-rate", default=None, type=float)
@click.option("--batch-size", default=None, type=int)
@click.option("--budget", default=None, type=int, help="Function evaluations (dfo).")
@click.option("--episodes-per", default=None, type=int, help="Episodes per evaluation (dfo/random).")
@click.option("--candidates", default=None, type=int, help="Random-search candidates.")
@click.option("--points", default=None, type=int, help="Grid points per coordinate (enum).")
@click.option("--tie-echelons/--no-tie-echelons", default=True, show_default=True)
@click.option("--jobs", default=1, show_default=True, help="Parallel candidate workers (random).")
@click.option("--out-dir", type=click.Path(), default=".", show_default=True)
@click.pass_obj
def optimize(server, path, method, seed, episodes, learning_rate, batch_size, budget,
             episodes_per, candidates, points, tie_echelons, jobs, out_dir):
    """Optimize order-up-to levels; writes a trace CSV and summary JSON."""
    doc = _load_doc(path)
    params: dict = {"tie_echelons": tie_echelons, "jobs": jobs}
    if episodes is not None:
        params["episodes"] = episodes
    if learning_rate is not None:
        params["learning_rate"] = learning_rate
    if batch_size is not None:
        params["batch_size"] = batch_size
    if budget is not None:
        params["budget"] = budget
    if episodes_per is not None:
        params["episodes_per"] = episodes_per
        params["episodes_per_eval"] = episodes_per
    if candidates is not None:
        params["candidates"] = candidates
    if points is not None:
        params["points"] = points

    with _client(server) as client:
        out = _post(client, "/optimize", {"instance": doc, "method": method, "seed": seed, "params": params})

    edges = [tuple(e) for e in out["decision_edges"]]
    click.echo(f"method: {out['method']}")
    click.echo("best OULs: " + ", ".join(f"{k}={v:.4f}" for k, v in out["best_ouls"].items()))
    click.echo(f"best episode cost: {out['best_episode_cost']:.4f}")
    click.echo(f"best cost/period:  {out['best_cost_per_period']:.4f}")
    click.echo(f"environment interactions: {out['environment_interactions']}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{Path(path).stem}_{method.replace('-', '_')}_seed{seed}"
    trace_path = out_dir / f"{stem}_trace.csv"
    with open(trace_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["episodes", "test_cost"] + [f"oul_{i}_{j}" for i, j in edges])
        for row in out["trace"]:
            writer.writerow([row["episodes"], row["test_cost"], *row["ouls"]])
    summary_path = out_dir / f"{stem}_summary.json"
    summary = {
        "method": out["method"],
        "best_ouls": out["best_ouls"],
        "best_cost": out["best_episode_cost"],
        "best_cost_per_period": out["best_cost_per_period"],
        "interactions": out["environment_interactions"],
        "seed": out["seed"],
        "wall_seconds": out["wall_seconds"],
        "extras": out["extras"],
    }
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    click.echo(f"trace: {trace_path}")
    click.echo(f"summary: {summary_path}")


@main.command()
@click.argument("fixture_sets", nargs=-1)
@click.option("--methods", default="adam", show_default=True, help="Comma-separated method list.")
@click.option("--seed", default=0, show_default=True)
@click.option("--adam-episodes", default=20_000, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="bench_out", show_default=True)
@click.pass_obj
def bench(server, fixture_sets, methods, seed, adam_episodes, out_dir):
    """Run methods over fixture sets and emit a comparison table."""
    with _client(server) as client:
        listing = client.get("/fixtures").json()
        known_sets = listing["sets"]
        ids: list[str] = []
        for name in fixture_sets:
            if name in known_sets:
                ids.extend(known_sets[name])
            else:
                ids.append(name)
        payload = {
            "fixtures": ids,
            "methods": [m.strip() for m in methods.split(",") if m.strip()],
            "seed": seed,
            "adam_episodes": adam_episodes,
        }
        out = _post(client, "/bench", payload)

    rows = out["rows"]
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    columns = ["fixture", "method", "cost", "reference_cost", "reference_scale",
               "relative_gap", "environment_interactions", "error"]
    csv_path = out_dir / "bench.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in columns})
    md_path = out_dir / "bench.md"
    with open(md_path, "w", encoding="utf-8") as fh:
        fh.write("| " + " | ".join(columns) + " |\n")
        fh.write("|" + "---|" * len(columns) + "\n")
        for row in rows:
            cells = []
            for k in columns:
                v = row.get(k)
                if isinstance(v, float):
                    v = f"{v:.4f}"
                cells.append("" if v is None else str(v))
            fh.write("| " + " | ".join(cells) + " |\n")
    for row in rows:
        gap = row.get("relative_gap")
        gap_text = f" gap={100 * gap:+.2f}%" if gap is not None else ""
        error = row.get("error")
        status = f" ERROR {error}" if error else ""
        cost = row.get("cost")
        cost_text = f"cost={cost:.4f}" if cost is not None else ""
        click.echo(f"{row['fixture']:20s} {row['method']:12s} {cost_text}{gap_text}{status}")
    click.echo(f"table: {csv_path} and {md_path}")


@main.command("fixtures")
@click.pass_obj
def list_fixtures_cmd(server):
    """List built-in fixtures and fixture sets."""
    with _client(server) as client:
        out = client.get("/fixtures").json()
    for name, members in out["sets"].items():
        click.echo(f"{name}: {', '.join(members)}")


@main.command("export-fixture")
@click.argument("fixture_id")
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def export_fixture(server, fixture_id, output):
    """Write a built-in fixture as an instance file."""
    with _client(server) as client:
        response = client.get(f"/fixtures/{fixture_id}")
        if response.status_code != 200:
            _fail(response)
        out = response.json()
    path = output or f"{fixture_id.replace('.', '_')}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(out["instance"], fh, indent=2)
        fh.write("\n")
    click.echo(f"wrote {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8321, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
