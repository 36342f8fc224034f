"""Command-line client for the scenario service.

By default commands run against an in-process instance of the HTTP service
(no socket, same contract); --server points them at a remote instance
instead.  Configuration comes from --config, naming either a TOML file or a
preset (shipped ones plus *.toml files in the directory named by the
ATOMLINK_CONFIG_DIR environment variable, resolved server-side).

Exit codes: 0 success, 2 configuration error, 3 runtime/transport error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

from . import __version__
from .config import ConfigError, ENV_CONFIG_DIR, parse_scenario

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_CSV_FLOAT = "{:.12g}".format


def _parse_float_list(text: str, what: str) -> list[float]:
    """Accept 'a,b,c' lists or 'start:stop:points' inclusive ranges."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("range must be start:stop:points")
            start, stop = float(parts[0]), float(parts[1])
            points = int(parts[2])
            if points < 1:
                raise ValueError("range needs at least one point")
            if stop < start:
                raise ValueError("range must be ascending")
            if points == 1 or stop == start:
                return [start]
            step = (stop - start) / (points - 1)
            return [start + i * step for i in range(points)]
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"invalid {what} {text!r}: {exc}") from exc


def _scenario_payload(config_value: str) -> dict:
    """Inline documents for file paths, preset references otherwise."""
    path = Path(config_value)
    if path.suffix == ".toml" or path.exists():
        try:
            document = tomllib.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        parse_scenario(document, source=str(path))  # fail fast with key paths
        return {"document": document}
    return {"preset": config_value}


async def _asgi_request(method: str, path: str, payload: dict | None) -> httpx.Response:
    from .service import app  # deferred: the CLI stays importable without server deps

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://atomlink.internal", timeout=None
    ) as client:
        return await client.request(method, path, json=payload)


def _call(args, method: str, path: str, payload: dict | None = None) -> dict:
    try:
        if args.server:
            with httpx.Client(base_url=args.server, timeout=600.0) as client:
                response = client.request(method, path, json=payload)
        else:
            response = asyncio.run(_asgi_request(method, path, payload))
    except httpx.HTTPError as exc:
        raise RuntimeError(f"service unreachable: {exc}") from exc
    if response.status_code in (404, 422):
        raise ConfigError(_detail(response))
    if response.status_code != 200:
        raise RuntimeError(_detail(response))
    return response.json()


def _detail(response: httpx.Response) -> str:
    try:
        payload = response.json()
    except ValueError:
        return response.text
    if isinstance(payload, dict) and "detail" in payload:
        detail = payload["detail"]
        return detail if isinstance(detail, str) else json.dumps(detail)
    return response.text


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_document(comments: list[str], header: list[str], rows: list[list]) -> str:
    lines = [f"# {comment}" for comment in comments]
    lines.append(",".join(header))
    for row in rows:
        lines.append(
            ",".join(_CSV_FLOAT(v) if isinstance(v, float) else str(v) for v in row)
        )
    return "\n".join(lines) + "\n"


def _echo_comments(command: str, data: dict, extra: dict | None = None) -> list[str]:
    comments = [f"atomlink {__version__} {command}"]
    if extra:
        for key, value in extra.items():
            comments.append(f"{key} = {json.dumps(value, sort_keys=True)}")
    echo = data.get("config_echo")
    if echo is not None:
        comments.append("config = " + json.dumps(echo, sort_keys=True))
    return comments


def _json_text(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def cmd_rate(args) -> int:
    payload = {"scenario": _scenario_payload(args.config)}
    if args.lengths:
        payload["lengths_km"] = _parse_float_list(args.lengths, "length range")
    if args.duty_cycle is not None:
        payload["duty_cycle"] = args.duty_cycle
    data = _call(args, "POST", "/rate", payload)
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    rows = [
        [r["L_km"], r["T_us"], r["R_hz"], r["eta"], r["r_per_s"]] for r in data["rows"]
    ]
    text = _csv_document(
        _echo_comments("rate", data),
        ["L_km", "T_us", "R_hz", "eta", "r_per_s"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def cmd_snr(args) -> int:
    payload = {"scenario": _scenario_payload(args.config)}
    if args.lengths:
        payload["lengths_km"] = _parse_float_list(args.lengths, "length range")
    if args.dark_counts is not None:
        payload["dark_cps"] = args.dark_counts
    data = _call(args, "POST", "/snr", payload)
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    rows = [
        [r["L_km"], r["p_signal"], r["p_qfc"], r["p_dc"], r["snr"]]
        for r in data["rows"]
    ]
    text = _csv_document(
        _echo_comments("snr", data),
        ["L_km", "p_signal", "p_qfc", "p_dc", "snr"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def cmd_raman(args) -> int:
    payload = {
        "scenario": _scenario_payload(args.config),
        "delta_min_mhz": args.delta_min,
        "delta_max_mhz": args.delta_max,
        "n_points": args.points,
    }
    if args.bias is not None:
        payload["bias_field_gauss"] = args.bias
    data = _call(args, "POST", "/raman", payload)
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    rows = [[r["delta_mhz"], r["p_target"], r["p_blocked"]] for r in data["rows"]]
    extra = {
        "resonance_three_mhz": data["resonance_three_mhz"],
        "resonance_four_mhz": data["resonance_four_mhz"],
        "contrast_on_resonance": data["contrast_on_resonance"],
    }
    text = _csv_document(
        _echo_comments("raman", data, extra),
        ["delta_mhz", "p_target", "p_blocked"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    payload = {"scenario": _scenario_payload(args.config), "include_records": True}
    if args.stop is not None:
        payload["stop_events"] = args.stop
    if args.hours is not None:
        payload["max_hours"] = args.hours
    if args.shards is not None:
        payload["shards"] = args.shards
    if args.seed is not None:
        payload["seed"] = args.seed
    data = _call(args, "POST", "/simulate", payload)
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    summary = data["summary"]
    report = data["report"]
    rows = [
        [
            record["time_us"],
            record["attempt_index"],
            record["photon_outcome"],
            record["atom_outcome"],
            record["truth"],
        ]
        for record in summary.get("records", [])
    ]
    comments = [f"atomlink {__version__} simulate"]
    comments.append(
        "run = " + json.dumps(
            {
                "seed": summary["seed"],
                "shards": summary["shards"],
                "generator": summary["generator"],
                "n_events": report["n_events"],
                "total_attempts": report["total_attempts"],
                "wall_hours": report["wall_hours"],
            },
            sort_keys=True,
        )
    )
    report_line = {
        key: report[key]
        for key in (
            "noise_fraction", "mean_visibility", "fidelity_lower_bound",
            "correlators", "chsh", "error_budget", "composed_fidelity",
        )
        if key in report
    }
    comments.append("report = " + json.dumps(report_line, sort_keys=True))
    comments.append("config = " + json.dumps(summary["config_echo"], sort_keys=True))
    text = _csv_document(
        comments,
        ["time_us", "attempt_idx", "photon_port", "atom_outcome", "truth_tag"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def cmd_coherence(args) -> int:
    payload = {"scenario": _scenario_payload(args.config), "basis": args.basis,
               "noise_sigma": args.noise}
    if args.delays:
        payload["delays_us"] = _parse_float_list(args.delays, "delay list")
    if args.seed is not None:
        payload["seed"] = args.seed
    data = _call(args, "POST", "/coherence", payload)
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    extra: dict = {"basis": data["basis"], "t2_model_us": data["t2_model_us"]}
    if data.get("fit"):
        extra["fit"] = data["fit"]
    if data.get("fit_error"):
        extra["fit_error"] = data["fit_error"]
    rows = [[r["delay_us"], r["visibility"]] for r in data["rows"]]
    text = _csv_document(
        _echo_comments("coherence", data, extra),
        ["delay_us", "visibility"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def cmd_analyze(args) -> int:
    source = Path(args.input)
    try:
        document = json.loads(source.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"{source}: not JSON: {exc}") from exc
    if isinstance(document, dict) and "summary" in document:
        document = document["summary"]  # accept whole simulate outputs
    data = _call(args, "POST", "/analyze", {"summary": document})
    report = data["report"]
    if args.format == "json":
        _emit(args, _json_text(data))
        return EXIT_OK
    comments = [f"atomlink {__version__} analyze"]
    for key in (
        "noise_fraction", "mean_visibility", "fidelity_lower_bound",
        "correlators", "chsh", "error_budget", "composed_fidelity",
        "expected_correlators",
    ):
        if key in report:
            comments.append(f"{key} = {json.dumps(report[key], sort_keys=True)}")
    rows = []
    for entry in report["setting_counts"]:
        table = entry["counts"]
        rows.append([entry["label"], table[0][0], table[0][1], table[1][0], table[1][1]])
    text = _csv_document(
        comments,
        ["setting", "n_atom+_photon+", "n_atom+_photon-", "n_atom-_photon+", "n_atom-_photon-"],
        rows,
    )
    _emit(args, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomlink",
        description="Simulation and link-budget engine for atom-photon "
        "entanglement distribution over fiber.",
        epilog=f"Preset lookup also searches ${ENV_CONFIG_DIR}.",
    )
    parser.add_argument("--version", action="version", version=f"atomlink {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", default="campaign-101km",
        help="scenario TOML file or preset name (default: campaign-101km)",
    )
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--server", default=None, help="remote service URL (default: in-process)")

    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", parents=[common], help="entanglement-rate sweep")
    p_rate.add_argument("--lengths", default=None,
                        help="fiber lengths: 'a,b,c' km or 'start:stop:points'")
    p_rate.add_argument("--duty-cycle", type=float, default=None)
    p_rate.set_defaults(func=cmd_rate)

    p_snr = sub.add_parser("snr", parents=[common], help="signal-to-noise sweep")
    p_snr.add_argument("--lengths", default=None,
                       help="fiber lengths: 'a,b,c' km or 'start:stop:points'")
    p_snr.add_argument("--dark-counts", type=float, default=None,
                       help="override the per-detector dark-count rate (cps)")
    p_snr.set_defaults(func=cmd_snr)

    p_raman = sub.add_parser("raman", parents=[common], help="transfer selectivity spectrum")
    p_raman.add_argument("--delta-min", type=float, default=-1.0, help="two-photon detuning, MHz")
    p_raman.add_argument("--delta-max", type=float, default=1.0, help="two-photon detuning, MHz")
    p_raman.add_argument("--points", type=int, default=401)
    p_raman.add_argument("--bias", type=float, default=None, help="bias field override, gauss")
    p_raman.set_defaults(func=cmd_raman)

    p_sim = sub.add_parser("simulate", parents=[common], help="run a detection campaign")
    p_sim.add_argument("--stop", type=int, default=None, help="stop after N detection events")
    p_sim.add_argument("--hours", type=float, default=None, help="stop after H simulated wall hours")
    p_sim.add_argument("--shards", type=int, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_coh = sub.add_parser("coherence", parents=[common], help="visibility decay dataset and fit")
    p_coh.add_argument("--basis", choices=("memory", "initial"), default="memory")
    p_coh.add_argument("--delays", default=None,
                       help="storage delays: 'a,b,c' us or 'start:stop:points'")
    p_coh.add_argument("--noise", type=float, default=0.02, help="visibility noise sigma")
    p_coh.set_defaults(func=cmd_coherence)

    p_an = sub.add_parser("analyze", parents=[common], help="re-analyze a saved campaign")
    p_an.add_argument("--input", required=True, help="summary JSON (simulate --format json output)")
    p_an.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
