"""Command-line client for the qutrit-pptes service.

The CLI is a thin HTTP client: by default it mounts the service
in-process (no network, no separate server needed) and speaks to it
over an ASGI transport; ``--server URL`` points it at a remote
instance instead.  stdout carries exactly one JSON document; log and
error text goes to stderr.  Exit codes: 0 success, 1 validation
failure, 2 mathematical-inconsistency (the regression alarm).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

__all__ = ["main"]

SEED_ENV = "QUTRIT_PPTES_SEED"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-pptes",
        description="Rank-4 PPT entangled states of two qutrits: UPB families, "
        "invariants, reconstruction, stabilizers and witnesses.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help=f"seed for randomized paths (default: ${SEED_ENV} or 0)")
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    upb = sub.add_parser("upb", help="UPB family generation and named fixtures")
    upb_sub = upb.add_subparsers(dest="upb_command", required=True)
    gen = upb_sub.add_parser("gen", help="generate the family quintuple at given angles")
    gen.add_argument("--gamma-a", type=float, required=True)
    gen.add_argument("--theta-a", type=float, required=True)
    gen.add_argument("--phi-a", type=float, required=True)
    gen.add_argument("--gamma-b", type=float, required=True)
    gen.add_argument("--theta-b", type=float, required=True)
    gen.add_argument("--phi-b", type=float, required=True)
    upb_sub.add_parser("tiles", help="the Tiles quintuple, its state and angles")
    upb_sub.add_parser("pyramid", help="the Pyramid-equivalent sextet and its state")

    inv = sub.add_parser("invariants", help="invariant sextet and symbol of a quintuple")
    inv.add_argument("--quintuple", required=True, metavar="FILE")

    cls = sub.add_parser("classify", help="span trichotomy of a quintuple")
    cls.add_argument("--quintuple", required=True, metavar="FILE")

    pp = sub.add_parser("pptes", help="build, check and reconstruct rank-4 states")
    pp_sub = pp.add_subparsers(dest="pptes_command", required=True)
    build = pp_sub.add_parser("build", help="UPB projector state, optionally ILO-conjugated")
    build.add_argument("--angles", required=True, metavar="FILE")
    build.add_argument("--ilo", default=None, metavar="FILE")
    check = pp_sub.add_parser("check", help="rank / PPT / entanglement report")
    check.add_argument("--state", required=True, metavar="FILE")
    rec = pp_sub.add_parser("reconstruct", help="recover the UPB presentation of a state")
    rec.add_argument("--state", required=True, metavar="FILE")

    ker = sub.add_parser("kernel", help="kernel product-state search")
    ker_sub = ker.add_subparsers(dest="kernel_command", required=True)
    prods = ker_sub.add_parser("products", help="all product states in the kernel")
    prods.add_argument("--state", required=True, metavar="FILE")

    stab = sub.add_parser("stabilizer", help="stabilizer group of a state's kernel sextet")
    stab.add_argument("--state", required=True, metavar="FILE")

    wit = sub.add_parser("witness", help="entanglement witness of a rank-4 state")
    wit.add_argument("--state", required=True, metavar="FILE")
    wit.add_argument("--restarts", type=int, default=200)

    fix = sub.add_parser("fixtures", help="reference-subspace verification")
    fix_sub = fix.add_subparsers(dest="fixtures_command", required=True)
    fix_sub.add_parser("verify", help="intersection counts and symbol-closure report")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _CliValidation(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _CliValidation(f"{path} is not valid JSON: {exc}") from exc


class _CliValidation(Exception):
    pass


def _state_payload(path: str):
    data = _load_json(path)
    if isinstance(data, dict) and "state" in data:
        data = data["state"]
    return data


def _quintuple_payload(path: str):
    data = _load_json(path)
    if isinstance(data, dict):
        data = data.get("quintuple") or data.get("product_vectors")
    if not isinstance(data, list):
        raise _CliValidation("quintuple file must hold a list of product vectors")
    return data


def _angles_payload(path: str):
    data = _load_json(path)
    if isinstance(data, dict) and "angles" in data:
        data = data["angles"]
    if not isinstance(data, dict):
        raise _CliValidation("angles file must hold an angles object")
    return data


def _request(args: argparse.Namespace, seed: int):
    """Route and JSON body for the parsed command."""
    cmd = args.command
    if cmd == "upb":
        if args.upb_command == "gen":
            angles = {
                "gamma_A": args.gamma_a,
                "theta_A": args.theta_a,
                "phi_A": args.phi_a,
                "gamma_B": args.gamma_b,
                "theta_B": args.theta_b,
                "phi_B": args.phi_b,
            }
            return "POST", "/upb/generate", {"angles": angles}
        return "GET", f"/upb/{args.upb_command}", None
    if cmd == "invariants":
        return "POST", "/invariants", {"quintuple": _quintuple_payload(args.quintuple)}
    if cmd == "classify":
        return "POST", "/classify", {"quintuple": _quintuple_payload(args.quintuple)}
    if cmd == "pptes":
        if args.pptes_command == "build":
            body = {"angles": _angles_payload(args.angles)}
            if args.ilo:
                ilo = _load_json(args.ilo)
                if not (isinstance(ilo, dict) and "A" in ilo and "B" in ilo):
                    raise _CliValidation('ILO file must hold {"A": ..., "B": ...}')
                body["ilo"] = ilo
            return "POST", "/pptes/build", body
        body = {"state": _state_payload(args.state), "seed": seed}
        return "POST", f"/pptes/{args.pptes_command}", body
    if cmd == "kernel":
        return "POST", "/kernel/products", {"state": _state_payload(args.state), "seed": seed}
    if cmd == "stabilizer":
        return "POST", "/stabilizer", {"state": _state_payload(args.state), "seed": seed}
    if cmd == "witness":
        return "POST", "/witness", {
            "state": _state_payload(args.state),
            "seed": seed,
            "restarts": args.restarts,
        }
    if cmd == "fixtures":
        return "POST", "/fixtures/verify", {"seed": seed}
    raise _CliValidation(f"unknown command {cmd!r}")


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # mount the service in-process over an ASGI portal; the import emits
    # a framework deprecation notice that would pollute stderr
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), base_url="http://service")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, "0"))

    try:
        method, route, body = _request(args, seed)
    except _CliValidation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        with _make_client(args.server) as client:
            if method == "GET":
                resp = client.get(route)
            else:
                resp = client.post(route, json=body)
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return 1

    indent = 2 if args.pretty else None
    separators = None if args.pretty else (",", ":")
    if resp.status_code == 200:
        print(json.dumps(resp.json(), indent=indent, separators=separators))
        return 0

    try:
        detail = resp.json().get("error", {})
        message = f"{detail.get('type', 'Error')}: {detail.get('message', resp.text)}"
    except (json.JSONDecodeError, ValueError, AttributeError):
        message = resp.text
    print(f"error ({resp.status_code}): {message}", file=sys.stderr)
    if resp.status_code == 409:
        return 2
    if resp.status_code >= 500:
        return 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
