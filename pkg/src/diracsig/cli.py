"""Command-line front end: a thin client of the HTTP service.

By default the client talks to the service in-process over an ASGI
transport (no network, same process, same cache), so all subcommands
work standalone; ``--server URL`` or the ``SIGOP_SERVER`` environment
variable points it at a remote instance instead, and ``diracsig serve``
runs one.

Exit codes: 0 success, 1 configuration error, 2 numerical error,
3 IO failure.  ``verify`` additionally exits 1 when any check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

from .config import RunConfig, apply_overrides, default_config, load_config

EXIT_BY_KIND = {"config": 1, "numerical": 2, "io": 3}


class _InProcessClient:
    """Synchronous facade over the ASGI app (httpx's ASGI transport is
    async-only); one event loop per request is fine for a CLI."""

    def __init__(self):
        from .service import app  # imported lazily; pulls in the numerics stack

        self._transport = httpx.ASGITransport(app=app)

    def post(self, path: str, json: dict) -> httpx.Response:
        import asyncio

        async def go() -> httpx.Response:
            async with httpx.AsyncClient(
                transport=self._transport, base_url="http://diracsig.local", timeout=None
            ) as client:
                return await client.post(path, json=json)

        return asyncio.run(go())

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _client(server: str | None):
    server = server or os.environ.get("SIGOP_SERVER")
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    return _InProcessClient()


class CliFailure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _post(client, path: str, payload: dict) -> dict:
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        raise CliFailure(f"cannot reach service: {exc}", 3) from exc
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", {})
        except ValueError:
            detail = {}
        if isinstance(detail, dict) and "kind" in detail:
            kind = detail["kind"]
            raise CliFailure(f"{kind} error: {detail.get('message', resp.text)}", EXIT_BY_KIND.get(kind, 2))
        raise CliFailure(f"service error {resp.status_code}: {resp.text}", 2)
    return resp.json()


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = default_config(getattr(args, "model", None) or "drum")
    overrides = list(getattr(args, "set", None) or [])
    if getattr(args, "model", None):
        overrides.insert(0, f"model={args.model}")
    if getattr(args, "n_max", None) is not None:
        overrides.append(f"n_max={args.n_max}")
    if getattr(args, "mass", None) is not None:
        overrides.append(f"mass={args.mass}")
    if getattr(args, "lifetime", None) is not None:
        overrides.append(f"slab_lifetime={args.lifetime}")
    if getattr(args, "seed", None) is not None:
        overrides.append(f"seed={args.seed}")
    if getattr(args, "sym", None):
        overrides.append("symmetries=" + json.dumps(list(args.sym)))
    if getattr(args, "tol", None):
        named = [t for t in args.tol if "=" in t]
        bare = [t for t in args.tol if "=" not in t]
        if bare:
            overrides.append(f"global_tolerance={bare[-1]}")
        if named:
            overrides.append("tolerances=" + json.dumps({k: float(v) for k, v in (t.split("=", 1) for t in named)}))
    if getattr(args, "cache_dir", None):
        overrides.append(f"cache_dir={json.dumps(args.cache_dir)}")
    return apply_overrides(cfg, overrides)


def _config_payload(cfg: RunConfig) -> dict:
    return cfg.to_dict()


def _write_text(path: str | Path, text: str) -> None:
    try:
        p = Path(path)
        if p.parent != Path(""):
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliFailure(f"cannot write {path}: {exc}", 3) from exc


def cmd_assemble(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    with _client(args.server) as client:
        out = _post(
            client,
            "/assemble",
            {"config": _config_payload(cfg), "use_cache": not args.no_cache},
        )
    _write_text(args.out, out["canonical"])
    status = "cache hit" if out["cache_hit"] else "assembled"
    print(f"{status} {out['content_hash'][:16]} -> {args.out}")
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(Path(args.matrix).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliFailure(f"cannot read {args.matrix}: {exc}", 3) from exc
    except json.JSONDecodeError as exc:
        raise CliFailure(f"{args.matrix} is not valid JSON: {exc}", 1) from exc
    with _client(args.server) as client:
        out = _post(client, "/spectrum", {"document": doc})
    if args.out:
        _write_text(args.out, out["csv"])
        print(f"spectrum ({len(out['eigenvalues'])} values) -> {args.out}")
    else:
        sys.stdout.write(out["csv"])
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    with _client(args.server) as client:
        out = _post(
            client,
            "/verify",
            {"config": _config_payload(cfg), "inject_fault": args.inject_fault},
        )
    if args.out:
        _write_text(args.out, out["jsonl"])
    else:
        sys.stdout.write(out["jsonl"])
    if args.csv:
        _write_text(args.csv, out["csv"])
    n = len(out["reports"])
    failed = [r["name"] for r in out["reports"] if not r["pass"]]
    if failed:
        print(f"verify: {n - len(failed)}/{n} checks passed; FAILED: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"verify: {n}/{n} checks passed", file=sys.stderr)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    try:
        text = Path(args.report).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFailure(f"cannot read {args.report}: {exc}", 3) from exc
    with _client(args.server) as client:
        out = _post(client, "/report", {"jsonl": text})
    if args.csv:
        _write_text(args.csv, out["csv"])
    sys.stdout.write(out["table"])
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        import uvicorn
    except ImportError as exc:  # pragma: no cover
        raise CliFailure("serving requires uvicorn (pip install 'diracsig[serve]')", 1) from exc
    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracsig",
        description="Assemble the signature operator of 2D model space-times and verify its symmetry identities.",
    )
    parser.add_argument("--server", default=None, help="service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (dotted paths allowed)")
        p.add_argument("--model", default=None, help="drum or slab")
        p.add_argument("--n-max", dest="n_max", type=int, default=None)
        p.add_argument("--mass", type=float, default=None)
        p.add_argument("--lifetime", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--cache-dir", default=None)

    pa = sub.add_parser("assemble", help="assemble the pairing/Gram matrices and write a sigop-matrix/1 file")
    common(pa)
    pa.add_argument("--out", required=True, help="output JSON path")
    pa.add_argument("--no-cache", action="store_true")
    pa.set_defaults(fn=cmd_assemble)

    ps = sub.add_parser("spectrum", help="eigenvalues of an assembled matrix file, as CSV")
    ps.add_argument("--matrix", required=True, help="sigop-matrix/1 JSON file")
    ps.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    ps.set_defaults(fn=cmd_spectrum)

    pv = sub.add_parser("verify", help="run the check suite; exit 0 iff all checks pass")
    common(pv)
    pv.add_argument("--sym", action="append", metavar="NAME",
                    help="restrict symmetry checks: parity, time-reflection, translate:<a>, hamiltonian")
    pv.add_argument("--tol", action="append", metavar="[NAME=]VALUE",
                    help="tolerance override; bare value applies to all upper-bound checks")
    pv.add_argument("--inject-fault", action="store_true", help="negative control: corrupt the operator")
    pv.add_argument("--out", default=None, help="JSON-lines report path (default: stdout)")
    pv.add_argument("--csv", default=None, help="also write the CSV summary here")
    pv.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("report", help="format a JSON-lines report as a table / CSV summary")
    pr.add_argument("--report", required=True, help="JSON-lines report file")
    pr.add_argument("--csv", default=None, help="CSV output path")
    pr.set_defaults(fn=cmd_report)

    pserve = sub.add_parser("serve", help="run the HTTP service")
    pserve.add_argument("--host", default="127.0.0.1")
    pserve.add_argument("--port", type=int, default=8787)
    pserve.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliFailure as exc:
        print(f"diracsig: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:  # config errors raised client-side
        from .errors import DiracsigError

        if isinstance(exc, DiracsigError):
            print(f"diracsig: {exc}", file=sys.stderr)
            return exc.exit_code
        raise


if __name__ == "__main__":
    sys.exit(main())
