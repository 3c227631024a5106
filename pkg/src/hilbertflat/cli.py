"""Command-line client for the HTTP service.

Every subcommand is a thin request wrapper: by default the app is mounted
in-process (no socket, fully deterministic), while --server URL points the
same client at a remote instance.  `serve` runs the service under uvicorn.

Exit codes: 0 success, 1 invalid input (including usage and HTTP 400),
2 numeric failure (HTTP 5xx or transport errors).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx


def _vec(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_polytope(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read polytope file {path}: {exc}", file=sys.stderr)
        raise SystemExit(1) from exc


def _add_sampling(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--samples", type=int, default=1000, help="sample count (default 1000)")
    p.add_argument("--margin", type=float, default=1e-6,
                   help="minimum facet slack of sampled points (default 1e-6)")


def _add_common(p: argparse.ArgumentParser, polytope: bool = True):
    if polytope:
        p.add_argument("--polytope", required=True, metavar="PATH",
                       help="polytope JSON file")
    p.add_argument("--server", default=None, metavar="URL",
                   help="remote service URL (default: run the app in-process)")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write output to PATH instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hilbertflat",
                     description="Hilbert geometry of polytopes and its flattening map")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", parents=[], help="Hilbert distance between two points")
    _add_common(p)
    p.add_argument("--p", type=_vec, required=True, help="first point, comma-separated")
    p.add_argument("--q", type=_vec, required=True, help="second point, comma-separated")

    p = sub.add_parser("finsler", help="Finsler norm of a tangent vector")
    _add_common(p)
    p.add_argument("--p", type=_vec, required=True, help="base point")
    p.add_argument("--v", type=_vec, required=True, help="tangent vector")

    p = sub.add_parser("subdivide", help="barycentric cells of the polytope")
    _add_common(p)

    p = sub.add_parser("flatten", help="image of a point under the flattening map")
    _add_common(p)
    p.add_argument("--p", type=_vec, required=True, help="interior point")

    p = sub.add_parser("unflatten", help="preimage of a point of R^n")
    _add_common(p)
    p.add_argument("--y", type=_vec, required=True, help="point of the flat codomain")

    p = sub.add_parser("estimate-lipschitz", help="empirical bi-Lipschitz constant")
    _add_common(p)
    _add_sampling(p)

    p = sub.add_parser("estimate-cells", help="empirical per-cell distortion constants")
    _add_common(p)
    _add_sampling(p)

    p = sub.add_parser("nested-ratio", help="Finsler ratio experiment on nested simplices")
    _add_common(p, polytope=False)
    p.add_argument("--s", required=True, metavar="PATH", help="inner simplex JSON")
    p.add_argument("--c1", required=True, metavar="PATH", help="middle simplex JSON")
    p.add_argument("--c2", required=True, metavar="PATH", help="outer simplex JSON")
    _add_sampling(p)

    p = sub.add_parser("check-isometry", help="simplex log-map isometry deviation")
    _add_common(p, polytope=False)
    p.add_argument("--dim", type=int, required=True, help="simplex dimension (1-4)")
    _add_sampling(p)

    p = sub.add_parser("emit-grid", help="CSV grid of the 2-D flattening map")
    _add_common(p)
    p.add_argument("--resolution", type=int, default=50,
                   help="grid nodes per axis (default 50)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _request(server: str | None, path: str, payload: dict) -> tuple[int, bytes, str]:
    """POST the payload; returns (status, body, content_type)."""
    if server is None:
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        base = "http://hilbertflat.internal"
    else:
        transport = None
        base = server

    async def go():
        async with httpx.AsyncClient(transport=transport, base_url=base,
                                     timeout=None) as client:
            r = await client.post(path, json=payload)
            return r.status_code, r.content, r.headers.get("content-type", "")

    return asyncio.run(go())


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _finish(status: int, body: bytes, content_type: str, out: str | None) -> int:
    if status == 200:
        if content_type.startswith("text/csv"):
            _emit(body.decode("utf-8"), out)
        else:
            obj = json.loads(body)
            _emit(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n", out)
        return 0
    try:
        detail = json.loads(body)
    except json.JSONDecodeError:
        detail = {"error": "ServiceError", "detail": body.decode("utf-8", "replace")}
    print(json.dumps(detail, sort_keys=True), file=sys.stderr)
    return 1 if status == 400 else 2


def _payload(args: argparse.Namespace) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "distance":
        return "/distance", {"polytope": _load_polytope(args.polytope),
                             "p": args.p, "q": args.q}
    if cmd == "finsler":
        return "/finsler", {"polytope": _load_polytope(args.polytope),
                            "p": args.p, "v": args.v}
    if cmd == "subdivide":
        return "/subdivide", {"polytope": _load_polytope(args.polytope)}
    if cmd == "flatten":
        return "/flatten", {"polytope": _load_polytope(args.polytope), "p": args.p}
    if cmd == "unflatten":
        return "/unflatten", {"polytope": _load_polytope(args.polytope), "y": args.y}
    if cmd == "estimate-lipschitz":
        return "/estimate/lipschitz", {"polytope": _load_polytope(args.polytope),
                                       "seed": args.seed, "samples": args.samples,
                                       "margin": args.margin}
    if cmd == "estimate-cells":
        return "/estimate/cells", {"polytope": _load_polytope(args.polytope),
                                   "seed": args.seed, "samples": args.samples,
                                   "margin": args.margin}
    if cmd == "nested-ratio":
        return "/estimate/nested-ratio", {"s": _load_polytope(args.s),
                                          "c1": _load_polytope(args.c1),
                                          "c2": _load_polytope(args.c2),
                                          "seed": args.seed, "samples": args.samples,
                                          "margin": args.margin}
    if cmd == "check-isometry":
        return "/check-isometry", {"dim": args.dim, "seed": args.seed,
                                   "samples": args.samples, "margin": args.margin}
    if cmd == "emit-grid":
        return "/grid", {"polytope": _load_polytope(args.polytope),
                         "resolution": args.resolution}
    raise AssertionError(f"unhandled command {cmd}")


_VEC_FLAGS = {"--p", "--q", "--v", "--y"}


def _merge_vector_flags(argv: list[str]) -> list[str]:
    """Rewrite ['--p', '-0.7,0.3'] as ['--p=-0.7,0.3'].

    argparse would otherwise read a leading-minus vector as an option name.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VEC_FLAGS and i + 1 < len(argv) and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def cli_main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = build_parser().parse_args(_merge_vector_flags(argv))
    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    path, payload = _payload(args)
    try:
        status, body, content_type = _request(args.server, path, payload)
    except httpx.HTTPError as exc:
        print(f"transport failure: {exc}", file=sys.stderr)
        return 2
    return _finish(status, body, content_type, args.out)


def main(argv=None) -> int:
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
