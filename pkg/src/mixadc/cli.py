"""Thin command-line client for the mixadc service.

Subcommands build a request, send it over HTTP, and write the response;
physics lives behind the service boundary.  By default the app is mounted
in-process through an ASGI transport (no server needed); ``--server URL``
talks to a running instance instead, and ``serve`` starts one.
"""
from __future__ import annotations

import argparse
import json
import sys

import httpx

from . import __version__
from .experiments import SWEEP_KINDS, parse_config_file, parse_csv_metadata

_TIMEOUT = 3600.0

_SYSTEM_KEYS = {
    "m": "M",
    "n": "N",
    "b": "b",
    "k_db": "K_db",
    "pu_db": "pu_db",
    "tau": "tau",
    "d_over_lambda": "d_over_lambda",
    "bandwidth_hz": "W_hz",
}
_SWEEP_KEYS = {
    "csi": "csi",
    "normalized_beta": "normalized_beta",
    "redraw_users_per_point": "redraw_users_per_point",
    "e_u_db": "E_u_db",
    "b_high": "b_high",
}
_MC_KEYS = ("realizations", "seed", "workers", "ci_level")


def _request_body_from_config(path: str) -> dict:
    """Map a parsed config file onto the sweep request wire format.

    Power constants stay in their I/O units (mW / fJ); the service converts.
    """
    config = parse_config_file(path)
    body: dict = {}
    for key, field in _SYSTEM_KEYS.items():
        if key in config.get("system", {}):
            body[field] = config["system"][key]
    sweep = config.get("sweep", {})
    for key, field in _SWEEP_KEYS.items():
        if key in sweep:
            body[field] = sweep[key]
    if "methods" in sweep:
        body["methods"] = [m.strip() for m in str(sweep["methods"]).split(",") if m.strip()]
    for key in _MC_KEYS:
        if key in config.get("mc", {}):
            body[key] = config["mc"][key]
    if config.get("geometry"):
        body["geometry"] = dict(config["geometry"])
    if config.get("power"):
        power = dict(config["power"])
        if "b_high" in power:
            body["b_high"] = power.pop("b_high")
        if power:
            body["power"] = power
    return body


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=_TIMEOUT)
    # In-process fallback: mount the ASGI app behind a synchronous portal so
    # the CLI speaks the exact same wire format without a running server.
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="Using `httpx`")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), base_url="http://mixadc.internal")


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _fail_on_error(response: httpx.Response) -> None:
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        sys.stderr.write(f"error: {detail}\n")
        raise SystemExit(2)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file with [system]/[geometry]/[power]/[mc]/[sweep] sections")
    parser.add_argument("--seed", type=int, help="base RNG seed (unsigned 64-bit)")
    parser.add_argument("--realizations", type=int, help="Monte Carlo realizations per point")
    parser.add_argument("--workers", type=int, help="worker threads (never changes the numbers)")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")


def _config_overrides(args) -> dict:
    if not args.config:
        return {}
    return _request_body_from_config(args.config)


def cmd_sweep(args) -> int:
    body = _config_overrides(args)
    if args.replay:
        with open(args.replay, "r", encoding="utf-8") as handle:
            metadata = parse_csv_metadata(handle.read())
        body = {"replay_metadata": metadata}
    else:
        body["kind"] = args.kind
        if args.normalized_beta:
            body["normalized_beta"] = True
    for key in ("seed", "realizations", "workers"):
        value = getattr(args, key)
        if value is not None:
            body[key] = value
    with _client(args.server) as client:
        response = client.post("/sweep", json=body, params={"format": args.format})
        _fail_on_error(response)
        _write_output(response.text, args.out)
    return 0


def cmd_validate(args) -> int:
    body = {"quick": args.quick}
    if args.seed is not None:
        body["seed"] = args.seed
    with _client(args.server) as client:
        response = client.post("/validate", json=body)
        _fail_on_error(response)
        report = response.json()
    if args.format == "json" or args.out:
        _write_output(json.dumps(report, indent=2), args.out)
    if not args.out:
        for check in report["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            print(f"{status} {check['name']}: measured={check['measured']:.6g} "
                  f"tolerance={check['tolerance']:.6g} ({check['detail']})")
        total = len(report["checks"])
        good = sum(c["passed"] for c in report["checks"])
        print(f"{'PASS' if report['passed'] else 'FAIL'} overall: {good}/{total} checks passed")
    return 0 if report["passed"] else 1


def cmd_quantizer_table(args) -> int:
    with _client(args.server) as client:
        response = client.get("/quantizer-table")
        _fail_on_error(response)
        rows = response.json()["rows"]
    if args.format == "json":
        _write_output(json.dumps(rows, indent=2), args.out)
    else:
        lines = ["b,rho,alpha"]
        lines += [f"{r['b']},{r['rho']!r},{r['alpha']!r}" for r in rows]
        _write_output("\n".join(lines) + "\n", args.out)
    return 0


def cmd_power_report(args) -> int:
    body = {"M": args.M, "M0": args.M0, "b": args.b, "b_high": args.b_high}
    config = _config_overrides(args)
    if "b_high" in config and args.b_high == 12:
        body["b_high"] = config["b_high"]
    if "power" in config:
        body["power"] = config["power"]
    with _client(args.server) as client:
        response = client.post("/power-report", json=body)
        _fail_on_error(response)
        report = response.json()
    if args.format == "json":
        _write_output(json.dumps(report, indent=2), args.out)
    else:
        lines = ["component,milliwatts"]
        lines += [f"{name},{value!r}" for name, value in report["components_mw"].items()]
        lines.append(f"total,{report['total_mw']!r}")
        _write_output("\n".join(lines) + "\n", args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixadc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mixadc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a named sweep and emit CSV/JSON")
    p_sweep.add_argument("kind", nargs="?", choices=SWEEP_KINDS, help="sweep kind (omit with --replay)")
    p_sweep.add_argument("--normalized-beta", action="store_true", help="set every user's large-scale gain to 1")
    p_sweep.add_argument("--replay", help="rerun the sweep recorded in an output CSV's metadata header")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_validate = sub.add_parser("validate", help="run the full validation suite")
    p_validate.add_argument("--quick", action="store_true", help="reduced sample counts")
    _add_common(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_table = sub.add_parser("quantizer-table", help="emit the bits-to-distortion table as CSV")
    _add_common(p_table)
    p_table.set_defaults(func=cmd_quantizer_table)

    p_power = sub.add_parser("power-report", help="receiver power breakdown for one configuration")
    p_power.add_argument("--M", type=int, required=True)
    p_power.add_argument("--M0", type=int, required=True)
    p_power.add_argument("--b", type=int, default=1)
    p_power.add_argument("--b-high", dest="b_high", type=int, default=12)
    _add_common(p_power)
    p_power.set_defaults(func=cmd_power_report)

    p_serve = sub.add_parser("serve", help="start the HTTP service under uvicorn")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "sweep" and not args.replay and not args.kind:
        parser.error("sweep requires a kind (or --replay)")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
