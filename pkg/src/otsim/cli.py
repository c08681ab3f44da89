"""Command-line front end: ``otsim <module> <action> [options]``.

Every run writes plot-ready CSV files plus ``manifest.json`` into the output
directory.  Model parameters come from an INI file given with ``--config``;
any key left out falls back to the documented default.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .errors import ConfigError, OtsimError
from .io import SYSTEMS, Column, IngestWarning, ingest_csv, order_by, write_csv, write_text
from .manifest import RunManifest

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4, 5, 6
OUT_ENV = "OTSIM_OUT"

EPILOG = f"""\
exit codes:
  {EXIT_OK}  success
  1  unclassified toolkit error
  {EXIT_USAGE}  usage error (unknown subcommand or flag)
  {EXIT_CONFIG}  configuration error (message names file and line)
  {EXIT_DOMAIN}  domain error (parameter outside its valid range)
  {EXIT_NUMERIC}  numeric error (no convergence, instability, thermal runaway)
  {EXIT_IO}  input/output error (unreadable or malformed data file)

environment:
  {OUT_ENV}  default output root when --out is not given
"""


@dataclass
class Run:
    out: Path
    units: str
    seed: int
    workers: int
    strict: bool
    cfg: RunConfig
    manifest: RunManifest

    def emit_csv(self, name: str, columns, data) -> None:
        self.manifest.add_output(write_csv(self.out / name, columns, data, self.units))

    def emit_text(self, name: str, text: str) -> None:
        self.manifest.add_output(write_text(self.out / name, text))


def _params(cls, cfg: RunConfig, section: str, defaults: dict, strings: tuple[str, ...] = ()):
    """Build a parameter dataclass from defaults overridden by a config section."""
    names = {f.name for f in fields(cls)}
    values = dict(defaults)
    for key, raw in cfg.section(section).items():
        if key not in names:
            raise ConfigError(f"{cfg.where(section, key)}: unknown key {key!r} in [{section}]; "
                              f"expected one of {', '.join(sorted(names))}")
        values[key] = raw.strip() if key in strings else cfg.get(section, key)
    return cls(**values)


def _sweep(cfg: RunConfig, section: str, key: str, default) -> np.ndarray:
    start = cfg.get(section, f"{key}_start", default[0])
    stop = cfg.get(section, f"{key}_stop", default[1])
    n = cfg.get(section, f"{key}_points", default[2], kind=int)
    if n < 2:
        raise ConfigError(f"{cfg.where(section, key + '_points')}: need at least 2 points")
    if len(default) > 3 and default[3] == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError(f"{cfg.where(section, key + '_start')}: logarithmic sweep needs positive bounds")
        return np.geomspace(start, stop, n)
    return np.linspace(start, stop, n)


# ---------------------------------------------------------------------------- tft

TFT_DEFAULTS = dict(mobility=1e-4, c_ins=1e-3, width=100e-6, length=10e-6, v_th=0.0)


def run_tft_iv(run: Run, args) -> None:
    from .tft import TftParams, drain_current, transconductance

    p = _params(TftParams, run.cfg, "tft", TFT_DEFAULTS, strings=("polarity",))
    sign = 1.0 if p.polarity == "n" else -1.0
    vgs = sign * _sweep(run.cfg, "sweep", "vgs", (-1.0, 3.0, 81))
    vds_t = run.cfg.get("sweep", "vds_transfer", [0.1, 3.0], kind=list)
    vds = sign * _sweep(run.cfg, "sweep", "vds", (0.0, 3.0, 61))
    vgs_o = run.cfg.get("sweep", "vgs_output", [1.0, 2.0, 3.0], kind=list)

    rows = {"v_gs": [], "v_ds": [], "i_d": [], "g_m": []}
    for vd in vds_t:
        for vg in vgs:
            rows["v_gs"].append(vg)
            rows["v_ds"].append(sign * vd)
            rows["i_d"].append(drain_current(p, vg, sign * vd))
            rows["g_m"].append(transconductance(p, vg, sign * vd))
    cols = [Column("v_gs", "voltage"), Column("v_ds", "voltage"), Column("i_d", "current"),
            Column("g_m", "conductance")]
    run.emit_csv("transfer.csv", cols, rows)

    rows = {"v_gs": [], "v_ds": [], "i_d": []}
    for vg in vgs_o:
        for vd in vds:
            rows["v_gs"].append(sign * vg)
            rows["v_ds"].append(vd)
            rows["i_d"].append(drain_current(p, sign * vg, vd))
    run.emit_csv("output.csv", cols[:3], rows)


def run_tft_tlm(run: Run, args) -> None:
    from .tft import TlmPoint, tlm_extract

    schema = [Column("length", "length"), Column("r_tot_w", "sheet")]
    table = _ingest(run, args, schema)
    res = tlm_extract([TlmPoint(a, b) for a, b in zip(table["length"], table["r_tot_w"])])
    run.emit_text("tlm.txt", res.report())
    x = np.sort(np.unique(np.concatenate([[0.0], table["length"]])))
    run.emit_csv("tlm_fit.csv", schema, {"length": x, "r_tot_w": res.r_c_w + res.channel_slope * x})


# ---------------------------------------------------------------------------- opbt

OPBT_DEFAULTS = dict(i_ref=1e-3, v_ref=1.0, alpha=2.5, theta_th=4000.0, i_off=1e-7, e_act_on=0.3)


def run_opbt_trace(run: Run, args) -> None:
    from .opbt import OpbtThermalParams, ndr_sign_changes, trace_current_controlled

    p = _params(OpbtThermalParams, run.cfg, "opbt", OPBT_DEFAULTS)
    currents = _sweep(run.cfg, "trace", "i", (1e-4, 5e-2, 120, "log"))
    chunks = np.array_split(currents, max(1, min(run.workers, len(currents))))
    with ThreadPoolExecutor(max_workers=run.workers) as pool:
        parts = list(pool.map(lambda c: trace_current_controlled(p, c), chunks))
    trace = [op for part in parts for op in part]
    run.emit_csv("trace.csv", [Column("current", "current"), Column("voltage", "voltage"),
                               Column("temperature", "temperature"), Column("power", "power")],
                 {"current": [o.current for o in trace], "voltage": [o.voltage for o in trace],
                  "temperature": [o.temperature for o in trace], "power": [o.power for o in trace]})
    run.emit_text("summary.txt", f"ndr_sign_changes = {ndr_sign_changes(trace)}\n"
                                 f"s_shaped = {str(ndr_sign_changes(trace) > 0).lower()}\n")


def run_opbt_pulsed(run: Run, args) -> None:
    from .opbt import OpbtThermalParams, PulseSpec, pulsed_steady_temperature, solve_steady_state

    p = _params(OpbtThermalParams, run.cfg, "opbt", OPBT_DEFAULTS)
    pulse = _params(PulseSpec, run.cfg, "pulse", dict(pulse_width=1e-3, duty_cycle=0.1, thermal_capacitance=1e-6))
    volts = _sweep(run.cfg, "sweep", "v", (0.1, 1.0, 10))
    rows = {"voltage": volts, "t_pulsed": [], "t_dc": []}
    for v in volts:
        rows["t_pulsed"].append(pulsed_steady_temperature(p, pulse, v))
        rows["t_dc"].append(solve_steady_state(p, v)[0].temperature)
    run.emit_csv("pulsed.csv", [Column("voltage", "voltage"), Column("t_pulsed", "temperature"),
                                Column("t_dc", "temperature")], rows)


# ---------------------------------------------------------------------------- oect

OECT_DEFAULTS = dict(mobility=1e-4, p0=1e25, t_osc=100e-9, width=100e-6, length=10e-6, c_d=0.16021766 / 0.8)


def run_oect_transfer(run: Run, args) -> None:
    from .oect import OectParams, steady_state_current

    p = _params(OectParams, run.cfg, "oect", OECT_DEFAULTS)
    vgs = _sweep(run.cfg, "sweep", "vgs", (0.0, 0.8, 81))
    vds_list = run.cfg.get("sweep", "vds", [-0.2, -0.4, -0.6], kind=list)
    rows = {"v_gs": [], "v_ds": [], "i_d": []}
    for vd in vds_list:
        rows["v_gs"].extend(vgs)
        rows["v_ds"].extend([vd] * len(vgs))
        rows["i_d"].extend(steady_state_current(p, vgs, vd))
    run.emit_csv("steady_state.csv", [Column("v_gs", "voltage"), Column("v_ds", "voltage"),
                                      Column("i_d", "current")], rows)


def run_oect_step(run: Run, args) -> None:
    from .oect import ElectrolyteSpec, OectParams, gate_step_response, time_constants

    p = _params(OectParams, run.cfg, "oect", OECT_DEFAULTS)
    el = _params(ElectrolyteSpec, run.cfg, "electrolyte", dict(concentration=100.0))
    v_gs = run.cfg.get("step", "v_gs", 0.4)
    v_ds = run.cfg.get("step", "v_ds", -0.4)
    tau_e, tau_i = time_constants(p, v_ds, el)
    t = _sweep(run.cfg, "step", "t", (0.0, 10 * max(tau_e, tau_i), 201))
    run.emit_csv("transient.csv", [Column("t", "time"), Column("i_d", "current")],
                 {"t": t, "i_d": gate_step_response(p, t, v_gs, v_ds, el)})
    run.emit_text("time_constants.txt", f"tau_e_s = {tau_e!r}\ntau_i_s = {tau_i!r}\n")


# ---------------------------------------------------------------------------- impedance

CIRCUIT_DEFAULTS = dict(r_s=50.0, r1=200.0, c1=1e-6, r2=1000.0, c2=1e-5, r_w=5e4, omega_d=0.1, exponent=0.5)
CIRCUIT_KEYS = set(CIRCUIT_DEFAULTS) | {"boundary"}
SPECTRUM = [Column("omega", "angular"), Column("z_re", "resistance"), Column("z_im", "resistance")]


def _circuit(cfg: RunConfig, section: str, defaults: dict):
    from .impedance import parse_model

    values = dict(defaults)
    for key in cfg.section(section):
        if key not in CIRCUIT_KEYS:
            raise ConfigError(f"{cfg.where(section, key)}: unknown key {key!r} in [{section}]; "
                              f"expected one of {', '.join(sorted(CIRCUIT_KEYS))}")
        if key != "boundary":
            values[key] = cfg.get(section, key)
    return parse_model(values, cfg.get(section, "boundary", "reflecting", kind=str))


def run_impedance_simulate(run: Run, args) -> None:
    from .impedance import ImpedanceSpectrum, extract_rw_star

    model = _circuit(run.cfg, "circuit", CIRCUIT_DEFAULTS)
    omega = _sweep(run.cfg, "sweep", "omega", (1e-3, 1e5, 81, "log"))
    spec = ImpedanceSpectrum.from_model(model, omega)
    z = spec.z
    noise = run.cfg.get("sweep", "noise", 0.0)
    if noise > 0:
        rng = np.random.default_rng(run.seed)
        z = z * (1 + noise * rng.standard_normal(z.size)) + 1j * z.imag * noise * rng.standard_normal(z.size)
    run.emit_csv("spectrum.csv", SPECTRUM, {"omega": omega, "z_re": z.real, "z_im": z.imag})
    run.emit_text("model.txt", f"r_w_star_ohm = {extract_rw_star(model)!r}\n")


def run_impedance_fit(run: Run, args) -> None:
    from .impedance import FitOptions, ImpedanceSpectrum, circuit_impedance, diffusion_constant, fit_spectrum

    table = order_by(_ingest(run, args, SPECTRUM), "omega", run.strict)
    spec = ImpedanceSpectrum(table["omega"], table["z_re"] + 1j * table["z_im"])
    guess = _circuit(run.cfg, "guess", CIRCUIT_DEFAULTS)
    opts = FitOptions(
        weighting=run.cfg.get("fit", "weighting", "modulus", kind=str),
        fit_exponent=run.cfg.get("fit", "fit_exponent", False, kind=bool),
        symmetric=run.cfg.get("fit", "symmetric", False, kind=bool),
        max_iterations=run.cfg.get("fit", "max_iterations", 500, kind=int),
    )
    res = fit_spectrum(spec, guess, opts)
    report = res.report()
    b = run.cfg.get("fit", "diffusion_length", None)
    if b is not None:
        report += f"diffusion_constant_m2_s = {diffusion_constant(res.model.warburg.omega_d, b):.9g}\n"
    run.emit_text("fit.txt", report)
    z = circuit_impedance(res.model, spec.omega)
    run.emit_csv("fit.csv", SPECTRUM + [Column("z_re_fit", "resistance"), Column("z_im_fit", "resistance")],
                 {"omega": spec.omega, "z_re": spec.z.real, "z_im": spec.z.imag, "z_re_fit": z.real,
                  "z_im_fit": z.imag})


# ---------------------------------------------------------------------------- reservoir


def run_reservoir_logistic(run: Run, args) -> None:
    from .reservoir.maps import bifurcation_diagram, first_period_doubling, logistic_map

    gains = _sweep(run.cfg, "bifurcation", "gain", (2.5, 4.0, 1501))
    n_tr = run.cfg.get("bifurcation", "n_transient", 2000, kind=int)
    n_s = run.cfg.get("bifurcation", "n_sample", 64, kind=int)
    diag = bifurcation_diagram(logistic_map, gains, n_tr, n_s)
    run.emit_csv("bifurcation.csv", [Column("gain"), Column("y")],
                 {"gain": np.repeat(gains, n_s), "y": diag.ravel()})
    run.emit_text("doubling.txt", f"first_period_doubling = {first_period_doubling(gains, diag, 1e-4)!r}\n")


def run_reservoir_chaos(run: Run, args) -> None:
    from .reservoir.delay import NONLINEARITIES, DelayFeedbackConfig, integrate_delay_system
    from .reservoir.portrait import ResolutionWarning, box_counting_dimension, phase_portrait

    c = run.cfg
    tau = c.get("delay", "tau", 1.0)
    name = c.get("delay", "nonlinearity", "logistic", kind=str)
    if name not in NONLINEARITIES:
        raise ConfigError(f"{c.where('delay', 'nonlinearity')}: unknown nonlinearity {name!r}")
    gains = c.get("delay", "gains", [2.8, 3.2, 3.9], kind=list)
    cfg = DelayFeedbackConfig(
        tau=tau, step=c.get("delay", "step", 5e-3), gain=np.array(gains), tau_nl=c.get("delay", "tau_nl", 0.05),
        nonlinearity=NONLINEARITIES[name], history=lambda t: 0.5 + 0.1 * np.sin(7 * t),
    )
    horizon = c.get("delay", "horizon", 500.0)
    transient = c.get("delay", "transient", 200.0)
    traj = integrate_delay_system(cfg, horizon=horizon, batch=len(gains))
    rows = {"gain": [], "y_t": [], "y_lag": []}
    dims = []
    for k, g in enumerate(gains):
        pp = phase_portrait(traj.y[:, k], tau, step=traj.step, transient=transient)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            dims.append(box_counting_dimension(pp.points))
        rows["gain"].extend([g] * len(pp.points))
        rows["y_t"].extend(pp.points[:, 0])
        rows["y_lag"].extend(pp.points[:, 1])
    run.emit_csv("portrait.csv", [Column("gain"), Column("y_t"), Column("y_lag")], rows)
    run.emit_csv("dimension.csv", [Column("gain"), Column("dimension")], {"gain": gains, "dimension": dims})


def run_reservoir_iris(run: Run, args) -> None:
    from .reservoir.iris import IrisReservoirConfig, evaluate_split, iris_frequencies, load_iris, reservoir_features
    from .reservoir.readout import format_confusion

    names = {f.name for f in fields(IrisReservoirConfig)}
    kinds = {f.name: f.type for f in fields(IrisReservoirConfig)}
    values = {"mask_seed": run.seed}
    for key in run.cfg.section("iris"):
        if key not in names:
            raise ConfigError(f"{run.cfg.where('iris', key)}: unknown key {key!r} in [iris]")
        kind = {"int": int, "str": str}.get(kinds[key], float)
        values[key] = run.cfg.get("iris", key, kind=kind)
    cfg = IrisReservoirConfig(**values)
    data = load_iris(args.input) if args.input else load_iris()
    if args.input:
        run.manifest.add_input(args.input)
    lo, hi = data.ranges
    feats = reservoir_features(iris_frequencies(data.features, lo, hi), cfg)
    n_seeds = run.cfg.get("evaluation", "n_seeds", 10, kind=int)
    seeds = [run.seed + k for k in range(n_seeds)]
    with ThreadPoolExecutor(max_workers=run.workers) as pool:
        results = list(pool.map(lambda s: evaluate_split(feats, data, s, cfg), seeds))
    run.emit_csv("accuracy.csv", [Column("split_seed"), Column("accuracy")],
                 {"split_seed": seeds, "accuracy": [r.accuracy for r in results]})
    total = sum(r.confusion for r in results)
    text = f"mean_accuracy = {float(np.mean([r.accuracy for r in results]))!r}\n\n"
    run.emit_text("confusion.txt", text + format_confusion(total, data.species))


# ---------------------------------------------------------------------------- synapse


def run_synapse_pavlov(run: Run, args) -> None:
    from .synapse import run_pavlov_protocol

    rule = _growth_rule(run)
    res = run_pavlov_protocol(rule, amplitude=run.cfg.get("pavlov", "amplitude", 3.0),
                              training_time=run.cfg.get("pavlov", "training_time", 1800.0))
    run.emit_csv("pavlov.csv", [Column("phase"), Column("link_present"), Column("output_activated")],
                 {"phase": [r.phase for r in res], "link_present": [r.link_present for r in res],
                  "output_activated": [r.output_activated for r in res]})


def _growth_rule(run: Run):
    from .synapse import GrowthRule

    values = {"seed": run.seed}
    for key in run.cfg.section("growth"):
        if key not in {f.name for f in fields(GrowthRule)}:
            raise ConfigError(f"{run.cfg.where('growth', key)}: unknown key {key!r} in [growth]")
        values[key] = run.cfg.get("growth", key, kind=int if key == "seed" else float)
    return GrowthRule(**values)


def run_synapse_digits(run: Run, args) -> None:
    from .synapse import DIGIT_FIVE, digit_score, parse_bitmap, train_digit

    train = parse_bitmap(run.cfg.get("digits", "train", DIGIT_FIVE, kind=str))
    net = train_digit(train, _growth_rule(run))
    queries = [train.copy()]
    for k in range(15):
        q = train.copy()
        q[k] ^= 1
        queries.append(q)
    queries.append(1 - train)
    rows = {"query": [], "hamming": [], "score": []}
    for q in queries:
        rows["query"].append("".join(map(str, q)))
        rows["hamming"].append(int(np.count_nonzero(q != train)))
        rows["score"].append(digit_score(net, train, q))
    run.emit_csv("scores.csv", [Column("query"), Column("hamming"), Column("score")], rows)


def run_synapse_decay(run: Run, args) -> None:
    from .synapse import SynapseState, long_term_decay

    rs = run.cfg.get("decay", "reinforcement", [0.05, 0.5, 1.0], kind=list)
    hours = _sweep(run.cfg, "decay", "hours", (0.0, 48.0, 49))
    rows = {"reinforcement": [], "t": [], "retention": []}
    for r in rs:
        s = SynapseState(1.0, r, True)
        for h in hours:
            rows["reinforcement"].append(r)
            rows["t"].append(h * 3600.0)
            rows["retention"].append(long_term_decay(s, h * 3600.0).conductance)
    run.emit_csv("decay.csv", [Column("reinforcement"), Column("t", "time"), Column("retention")], rows)


# ---------------------------------------------------------------------------- dispatch

COMMANDS = {
    "tft": {"iv": (run_tft_iv, "transfer and output curves"),
            "tlm": (run_tft_tlm, "contact resistance from a TLM data file (--input)")},
    "opbt": {"trace": (run_opbt_trace, "current-controlled V(I) with self-heating"),
             "pulsed": (run_opbt_pulsed, "pulsed versus DC device temperature")},
    "oect": {"transfer": (run_oect_transfer, "steady-state transfer curves"),
             "step": (run_oect_step, "drain current after a gate step")},
    "impedance": {"simulate": (run_impedance_simulate, "spectrum of the equivalent circuit"),
                  "fit": (run_impedance_fit, "fit the equivalent circuit to a spectrum file (--input)")},
    "reservoir": {"logistic": (run_reservoir_logistic, "logistic-map bifurcation diagram"),
                  "chaos": (run_reservoir_chaos, "delay-system phase portraits and box dimension"),
                  "iris": (run_reservoir_iris, "Iris classification over several split seeds")},
    "synapse": {"pavlov": (run_synapse_pavlov, "four-phase conditioning truth table"),
                "digits": (run_synapse_digits, "15-pixel digit training and readout"),
                "decay": (run_synapse_decay, "48 h retention versus reinforcement")},
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="INI parameter file")
    p.add_argument("--input", help="input data file (CSV)")
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV}/<module>-<action> or ./otsim-out/...)")
    p.add_argument("--seed", type=int, default=0, help="seed for every random draw (default 0)")
    p.add_argument("--workers", type=int, default=1, help="worker threads for sweeps (default 1)")
    p.add_argument("--strict", action="store_true", help="reject extra columns and unsorted axes in inputs")
    p.add_argument("--units", choices=SYSTEMS, default="si", help="unit system of data files (default si)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="otsim", description="Organic transistor simulation and parameter extraction.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"otsim {__version__}")
    sub = parser.add_subparsers(dest="module", required=True, metavar="MODULE")
    for module, actions in COMMANDS.items():
        mp = sub.add_parser(module, help=f"{module} models", epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        asub = mp.add_subparsers(dest="action", required=True, metavar="ACTION")
        for action, (_, text) in actions.items():
            asub.add_parser(action, help=text, parents=[common], epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def _ingest(run: Run, args, schema):
    if not args.input:
        raise ConfigError("this action needs an input data file (--input)")
    table = ingest_csv(args.input, schema, run.units, run.strict)
    run.manifest.add_input(args.input)
    return table


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        cfg = load_config(args.config) if args.config else RunConfig()
        root = Path(os.environ.get(OUT_ENV, "otsim-out"))
        out = Path(args.out) if args.out else root / f"{args.module}-{args.action}"
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            print(f"otsim: cannot create output directory {out}: {exc}", file=sys.stderr)
            return EXIT_IO
        manifest = RunManifest(command=[args.module, args.action] + _replay_flags(args), config_hash=cfg.digest(),
                               config=cfg.sections, seed=args.seed, units=args.units)
        if args.config:
            manifest.add_input(args.config)
        run = Run(out, args.units, args.seed, args.workers, args.strict, cfg, manifest)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", IngestWarning)
            COMMANDS[args.module][args.action][0](run, args)
        for w in caught:
            print(f"otsim: warning: {w.message}", file=sys.stderr)
        manifest.write(out / "manifest.json")
    except OtsimError as exc:
        print(f"otsim: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"otsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _replay_flags(args) -> list[str]:
    flags = ["--seed", str(args.seed), "--units", args.units, "--workers", str(args.workers)]
    if args.strict:
        flags.append("--strict")
    return flags


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
