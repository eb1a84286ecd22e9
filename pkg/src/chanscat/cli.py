"""Command-line frontend: a thin client of the HTTP service.

By default every command talks to the service in-process over an ASGI
transport (no sockets); ``--server URL`` targets a running instance instead.
Files are written client-side with the exact bytes returned by the service.

Exit codes: 0 ok, 1 config error, 2 numeric error, 3 validity hard-fail.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VALIDITY = 3

_KIND_TO_EXIT = {"config": EXIT_CONFIG, "numeric": EXIT_NUMERIC, "validity": EXIT_VALIDITY}


class _InProcessTransport(httpx.BaseTransport):
    """Sync bridge over the ASGI app (httpx ships ASGITransport async-only)."""

    def __init__(self, app):
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        async def call() -> httpx.Response:
            response = await self._asgi.handle_async_request(request)
            body = await response.aread()
            await response.aclose()
            return httpx.Response(
                status_code=response.status_code, headers=response.headers, content=body
            )

        return asyncio.run(call())

    def close(self) -> None:
        pass


class ServiceClient:
    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=300.0)
        else:
            from .service import app

            self._client = httpx.Client(
                transport=_InProcessTransport(app), base_url="http://chanscat.local"
            )

    def get(self, path: str) -> httpx.Response:
        return self._client.get(path)

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(path, json=payload)

    def close(self) -> None:
        self._client.close()


def _fail_from_response(resp: httpx.Response) -> int:
    try:
        body = resp.json()
        kind = body.get("error_kind", "config")
        message = body.get("message", resp.text)
    except ValueError:
        kind, message = "config", resp.text
    print(f"error ({kind}): {message}", file=sys.stderr)
    return _KIND_TO_EXIT.get(kind, EXIT_CONFIG)


def _read_scenario(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        print(f"error (config): scenario file not found: {p}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    return p.read_text()


def _scenario_payload(args: argparse.Namespace) -> dict:
    return {"text": _read_scenario(args.scenario), "overrides": args.set or []}


def _write_bytes(path: str, content: str) -> None:
    Path(path).write_bytes(content.encode("utf-8"))


# -- subcommand handlers -------------------------------------------------------


def _cmd_lambda(client: ServiceClient, args: argparse.Namespace) -> int:
    resp = client.post(
        "/lambda",
        {
            "r": args.order,
            "N": args.index,
            "alpha": args.alpha,
            "beta": args.beta,
            "method": args.method,
            "tol": args.tol,
        },
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    body = resp.json()
    if body["quad"] is not None:
        print(f"quad    {body['quad']!r}  (nodes={body['nodes']})")
    if body["series"] is not None:
        print(f"series  {body['series']!r}")
    if body["difference"] is not None:
        print(f"diff    {body['difference']:.3e}")
    return EXIT_OK


def _cmd_frequency(client: ServiceClient, args: argparse.Namespace) -> int:
    payload = {
        "E_MeV": args.e_mev,
        "species": args.species,
        "s0": args.s0,
        "preset": args.preset,
        "omega0_eV": args.omega0_ev,
        "xi": args.xi,
        "l": args.l,
        "s": args.s,
        "theta_rad": args.theta_rad,
        "phi_rad": args.phi_rad,
        "compton_limit": args.compton_limit,
        "harmonic_ok": args.harmonic_ok,
    }
    for key, value in (
        ("U0_eV", args.u0_ev),
        ("d_angstrom", args.d_angstrom),
        ("n_index", args.n_index),
    ):
        if value is not None:
            payload[key] = value
    resp = client.post("/frequency", payload)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    body = resp.json()
    print(f"omega_eV         {body['omega_eV']!r}")
    print(f"forbidden        {body['forbidden']}")
    print(f"Omega_eV         {body['Omega_eV']!r}")
    print(f"doppler_forward  {body['doppler_forward']!r}")
    print(f"mean_v_z         {body['mean_v_z']!r}")
    print(f"delta0           {body['delta0']!r}")
    return EXIT_OK


def _cmd_spectrum(client: ServiceClient, args: argparse.Namespace) -> int:
    resp = client.post(
        "/spectrum",
        {
            "scenario": _scenario_payload(args),
            "force": args.force,
            "threads": args.threads,
        },
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    body = resp.json()
    _write_bytes(args.output, body["csv"])
    manifest_path = args.manifest or args.output + ".manifest"
    _write_bytes(manifest_path, body["manifest"])
    s = body["summary"]
    print(f"wrote {args.output} ({s['n_points']} points, {s['n_valid']} valid)")
    print(f"wrote {manifest_path}")
    print(f"peak omega_eV  {s['peak_omega_eV']!r}  (N={s['peak_omega_N']})")
    print(f"peak dW        {s['peak_dW']!r}  at omega_eV {s['peak_dW_omega_eV']!r}")
    print(f"validity       {s['validity']}")
    return EXIT_OK


def _cmd_sweep(client: ServiceClient, args: argparse.Namespace) -> int:
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError:
        print(f"error (config): bad --values list {args.values!r}", file=sys.stderr)
        return EXIT_CONFIG
    resp = client.post(
        "/sweep",
        {
            "scenario": _scenario_payload(args),
            "axis": args.axis,
            "values": values,
            "threads": args.threads,
        },
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    body = resp.json()
    _write_bytes(args.output, body["csv"])
    print(f"wrote {args.output} ({len(body['rows'])} rows)")
    for row in body["rows"]:
        print(
            f"  {row['axis']}={row['value']}  delta0={row.get('delta0', '')}  "
            f"peak_omega_eV={row.get('peak_omega_eV', '')}  validity={row.get('validity', '')}"
        )
    return EXIT_OK


def _cmd_validate(client: ServiceClient, args: argparse.Namespace) -> int:
    resp = client.post("/validate", {"scenario": _scenario_payload(args)})
    if resp.status_code != 200:
        return _fail_from_response(resp)
    body = resp.json()
    if args.json:
        print(json.dumps(body["map"], indent=2, sort_keys=True))
    else:
        print(body["text"])
    return EXIT_OK if body["verdict"] != "fail" else EXIT_VALIDITY


def _cmd_presets(client: ServiceClient, args: argparse.Namespace) -> int:
    resp = client.get("/presets")
    if resp.status_code != 200:
        return _fail_from_response(resp)
    table = resp.json()["presets"]
    for name in sorted(table):
        props = table[name]
        print(
            f"{name}: U0_eV={props['U0_eV']}  d_angstrom={props['d_angstrom']}  "
            f"n_index={props['n_index']}"
        )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanscat",
        description="Photon spectra for resonant laser scattering on channeled particles.",
    )
    parser.add_argument("--server", default=None, help="service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_lambda = sub.add_parser("lambda", help="evaluate Lambda_r(N, alpha, beta)")
    p_lambda.add_argument("-r", "--order", type=int, choices=(0, 1, 2), required=True)
    p_lambda.add_argument("-N", "--index", type=int, required=True)
    p_lambda.add_argument("--alpha", type=float, required=True)
    p_lambda.add_argument("--beta", type=float, required=True)
    p_lambda.add_argument("--method", choices=("quad", "series", "both"), default="quad")
    p_lambda.add_argument("--tol", type=float, default=1e-11)

    p_freq = sub.add_parser("frequency", help="emitted frequency for one channel")
    p_freq.add_argument("--e-mev", type=float, required=True)
    p_freq.add_argument("--species", choices=("positron", "electron"), default="positron")
    p_freq.add_argument("--s0", type=int, default=0)
    p_freq.add_argument("--preset", default="si-planar")
    p_freq.add_argument("--u0-ev", type=float, default=None)
    p_freq.add_argument("--d-angstrom", type=float, default=None)
    p_freq.add_argument("--n-index", type=float, default=None)
    p_freq.add_argument("--harmonic-ok", action="store_true")
    p_freq.add_argument("--omega0-ev", type=float, required=True)
    p_freq.add_argument("--xi", type=float, default=0.0)
    p_freq.add_argument("--l", type=int, default=1)
    p_freq.add_argument("--s", type=int, default=None)
    p_freq.add_argument("--theta-rad", type=float, default=0.0)
    p_freq.add_argument("--phi-rad", type=float, default=0.0)
    p_freq.add_argument("--compton-limit", action="store_true")

    p_spec = sub.add_parser("spectrum", help="run a scan and write CSV + manifest")
    p_spec.add_argument("scenario")
    p_spec.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_spec.add_argument("--output", "-o", default="spectrum.csv")
    p_spec.add_argument("--manifest", default=None)
    p_spec.add_argument("--force", action="store_true", help="run despite validity hard-fail")
    p_spec.add_argument("--threads", type=int, default=1)

    p_sweep = sub.add_parser("sweep", help="parameter sweep with one summary row per value")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_sweep.add_argument("--axis", choices=("xi", "delta0", "E"), required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_sweep.add_argument("--output", "-o", default="sweep.csv")
    p_sweep.add_argument("--threads", type=int, default=1)

    p_val = sub.add_parser("validate", help="applicability report for a scenario")
    p_val.add_argument("scenario")
    p_val.add_argument("--set", action="append", metavar="KEY=VALUE")
    p_val.add_argument("--json", action="store_true", help="machine-readable map")

    sub.add_parser("presets", help="list shipped channel presets")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


_HANDLERS = {
    "lambda": _cmd_lambda,
    "frequency": _cmd_frequency,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "presets": _cmd_presets,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    client = ServiceClient(args.server)
    try:
        return _HANDLERS[args.command](client, args)
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
