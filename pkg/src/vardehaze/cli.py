"""Command-line front end.

    vardehaze dehaze INPUT OUTPUT [options]
    vardehaze dump-maps INPUT DIR [options]
    vardehaze synthesize CLEAN DEPTH OUTPUT [--airlight r,g,b]
    vardehaze evaluate RESTORED REFERENCE [--csv FILE]

INPUT/OUTPUT of ``dehaze`` and both paths of ``evaluate`` may be
directories, in which case every PNG/PPM/PGM/PFM file is processed.
"""
import argparse
import csv
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import fileio
from .metrics import evaluate
from .pipeline import DehazeResult, PipelineConfig, dehaze
from .refinement import NonFiniteError
from .synthesis import DEFAULT_SCATTER, depth_preset, synthesize, transmission_stack

log = logging.getLogger("vardehaze")

IMAGE_SUFFIXES = {".png", ".ppm", ".pgm", ".pnm", ".pfm"}
CHANNELS = "rgb"

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_NONFINITE = 0, 1, 2, 3

# config key -> (flag, type); types are parsers from strings
_FLOAT_KEYS = ("omega", "tau", "percentile", "lambda1", "lambda2", "lambda3", "lambda4",
               "lambda5", "beta1", "beta2", "beta3", "gamma", "upsilon", "t_eps", "j_eps",
               "rel_tol", "airlight_top_fraction")
_INT_KEYS = ("window", "max_iters", "airlight_patch")


def _triple(text):
    vals = [float(v) for v in str(text).replace(" ", "").split(",") if v]
    if len(vals) != 3:
        raise ValueError(f"expected three comma-separated values, got {text!r}")
    return tuple(vals)


def _bool(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parser_for(key):
    if key in _FLOAT_KEYS:
        return float
    if key in _INT_KEYS:
        return int
    if key in ("betas", "airlight"):
        return _triple
    if key == "mono_t":
        return _bool
    return str


def build_config(values):
    """Turn a mapping of (string or typed) values into a validated PipelineConfig."""
    known = {f.name for f in fields(PipelineConfig)}
    kwargs = {}
    for key, raw in values.items():
        key = key.replace("-", "_")
        if key == "scatter":
            key = "betas"
        if key not in known:
            raise ValueError(f"unknown configuration key {key!r}")
        if raw is None:
            continue
        kwargs[key] = _parser_for(key)(raw)
    return PipelineConfig(**kwargs).validate()


def format_config(cfg):
    lines = []
    for key, val in asdict(cfg).items():
        if val is None:
            continue
        if isinstance(val, (tuple, list)):
            val = ",".join(repr(float(v)) for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines)


def _add_pipeline_flags(p):
    g = p.add_argument_group("pipeline parameters (override --config)")
    g.add_argument("--config", type=Path, help="key = value parameter file")
    g.add_argument("--airlight", help="atmospheric light r,g,b (skips estimation)")
    g.add_argument("--airlight-top-fraction", type=float)
    g.add_argument("--airlight-patch", type=int)
    g.add_argument("--omega", type=float)
    g.add_argument("--window", type=int)
    g.add_argument("--tau", type=float)
    g.add_argument("--percentile", type=float)
    g.add_argument("--scatter", help="per-channel scattering coefficients r,g,b")
    for i in range(1, 6):
        g.add_argument(f"--lambda{i}", type=float)
    for i in range(1, 4):
        g.add_argument(f"--beta{i}", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--t-eps", type=float)
    g.add_argument("--j-eps", type=float)
    g.add_argument("--upsilon", type=float)
    g.add_argument("--max-iters", type=int)
    g.add_argument("--rel-tol", type=float)
    g.add_argument("--mono-t", action="store_true", default=None,
                   help="average the three channel transmissions before recovery")
    g.add_argument("--transmission", type=Path,
                   help="PFM transmission map to use instead of estimating one")
    g.add_argument("--dump-maps", type=Path, metavar="DIR")
    g.add_argument("--trace", type=Path, metavar="FILE", help="per-iteration CSV trace")
    g.add_argument("--print-config", action="store_true")


def config_from_args(args):
    values = {}
    if args.config is not None:
        values.update(fileio.read_config(args.config))
    flag_keys = [f.name for f in fields(PipelineConfig) if f.name != "betas"] + ["scatter"]
    for key in flag_keys:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = str(v) if isinstance(v, Path) else v
    return build_config(values)


def _save_map(directory, name, data):
    fileio.write_pfm(directory / f"{name}.pfm", data)
    fileio.write_image(directory / f"{name}.png", np.clip(data, 0.0, 1.0))


def dump_maps(directory, result: DehazeResult):
    """Write shared and per-channel maps as PNG previews and PFM floats."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    maps = result.coarse
    if maps is not None:
        for name, data in (("dark", maps.dark), ("t_dcp", maps.t_dcp), ("chi", maps.chi)):
            _save_map(directory, name, data)
            written.append(name)
        for c, ch in enumerate(CHANNELS):
            _save_map(directory, f"t_lum_{ch}", maps.t_lum[c])
            _save_map(directory, f"t_coarse_{ch}", maps.t_bar[c])
            written += [f"t_lum_{ch}", f"t_coarse_{ch}"]
    for c, ch in enumerate(CHANNELS):
        _save_map(directory, f"t_final_{ch}", result.transmission[c])
        written.append(f"t_final_{ch}")
    return written


def write_trace(path, traces):
    """One row per iteration; channels r, g, b follow each other, iter restarts at 1."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "objective", "res_x", "res_y", "res_z", "dt_rel"])
        for tr in traces:
            for r in tr.records:
                w.writerow([r.iter, repr(r.objective), repr(r.res_x), repr(r.res_y),
                            repr(r.res_z), repr(r.dt_rel)])


def _load_transmission(path, shape):
    t = fileio.read_pfm(path)
    if t.ndim == 3:
        t = np.moveaxis(t, -1, 0)
    if t.shape[-2:] != shape:
        raise ValueError(f"transmission {path} has shape {t.shape[-2:]}, image is {shape}")
    return t


def process_one(src, dst, cfg, dump_dir=None, trace_path=None):
    hazy = fileio.read_color(src)
    t = _load_transmission(cfg.transmission, hazy.shape[:2]) if cfg.transmission else None
    result = dehaze(hazy, cfg, transmission=t, with_trace=trace_path is not None)
    if dst is not None:
        dst = Path(dst)
        if dst.suffix.lower() == ".pfm":
            fileio.write_pfm(dst, result.dehazed)
        else:
            fileio.write_image(dst, result.dehazed)
    if dump_dir is not None:
        dump_maps(dump_dir, result)
    if trace_path is not None:
        write_trace(trace_path, result.traces)
    return result


def _list_images(directory):
    return sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def _run_job(job):
    src, dst, cfg, dump_dir, trace_path = job
    try:
        process_one(src, dst, cfg, dump_dir, trace_path)
    except NonFiniteError as exc:
        return src, EXIT_NONFINITE, f"{src}: {exc}"
    except (OSError, ValueError) as exc:
        return src, EXIT_ERROR, f"{src}: {exc}"
    return src, EXIT_OK, None


def cmd_dehaze(args, write_output=True):
    cfg = config_from_args(args)
    if args.print_config:
        print(format_config(cfg))
    src = Path(args.input)
    if not src.exists():
        raise ValueError(f"input {src} does not exist")
    dump_root = Path(cfg.dump_maps) if cfg.dump_maps else None
    trace = Path(cfg.trace) if cfg.trace else None
    if not write_output:
        dump_root = Path(args.directory)

    if not src.is_dir():
        dst = Path(args.output) if write_output else None
        _, code, msg = _run_job((src, dst, cfg, dump_root, trace))
        if msg:
            log.error(msg)
        return code

    jobs = []
    out_dir = Path(args.output) if write_output else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for f in _list_images(src):
        dst = out_dir / f"{f.stem}.png" if out_dir is not None else None
        dump = dump_root / f.stem if dump_root is not None else None
        tr = trace.with_name(f"{trace.stem}_{f.stem}{trace.suffix}") if trace else None
        jobs.append((f, dst, cfg, dump, tr))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    code = EXIT_OK
    for _, c, msg in results:
        if msg:
            log.error(msg)
        code = max(code, c)
    return code


def cmd_dump_maps(args):
    return cmd_dehaze(args, write_output=False)


def _load_depth(spec, shape):
    path = Path(spec)
    if path.exists():
        depth = fileio.read_image(path)
        if depth.ndim == 3:
            depth = depth.mean(axis=2)
        if depth.shape != shape:
            raise ValueError(f"depth map {path} has shape {depth.shape}, image is {shape}")
        return depth
    return depth_preset(spec, *shape)


def cmd_synthesize(args):
    clean = fileio.read_color(args.clean)
    A = np.array(_triple(args.airlight))
    betas = _triple(args.scatter)
    depth = _load_depth(args.depth, clean.shape[:2]) * args.depth_scale
    t = transmission_stack(np.nan_to_num(depth, posinf=1e300), betas)
    hazy = synthesize(clean, t, A)
    out = Path(args.output)
    if out.suffix.lower() == ".pfm":
        fileio.write_pfm(out, hazy)
    else:
        fileio.write_image(out, hazy)
    fileio.write_pfm(out.with_name(f"{out.stem}_t.pfm"), np.moveaxis(t, 0, -1))
    fileio.write_airlight(out.with_name(f"{out.stem}_airlight.txt"), A)
    return EXIT_OK


def _pairs(restored, reference):
    restored, reference = Path(restored), Path(reference)
    if restored.is_dir() != reference.is_dir():
        raise ValueError("restored and reference must both be files or both directories")
    if not restored.is_dir():
        return [(restored.name, restored, reference)]
    pairs = []
    for f in _list_images(restored):
        ref = reference / f.name
        if not ref.exists():
            matches = [p for p in _list_images(reference) if p.stem == f.stem]
            if not matches:
                raise ValueError(f"no reference image for {f.name}")
            ref = matches[0]
        pairs.append((f.name, f, ref))
    return pairs


def cmd_evaluate(args):
    rows = []
    for name, a, b in _pairs(args.restored, args.reference):
        ra, rb = fileio.read_color(a), fileio.read_color(b)
        if ra.shape != rb.shape:
            raise ValueError(f"{name}: image shapes differ {ra.shape} vs {rb.shape}")
        rep = evaluate(ra, rb)
        rows.append((name, rep.psnr, rep.ssim))
    width = max(len("image"), *(len(r[0]) for r in rows))
    print(f"{'image':<{width}}  {'psnr_db':>9}  {'ssim':>7}")
    for name, p, s in rows:
        ps = "inf" if math.isinf(p) else f"{p:.4f}"
        print(f"{name:<{width}}  {ps:>9}  {s:>7.4f}")
    if args.csv is not None:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["image", "psnr_db", "ssim"])
            for name, p, s in rows:
                w.writerow([name, "inf" if math.isinf(p) else repr(p), repr(s)])
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(prog="vardehaze", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dehaze", help="dehaze an image or a directory of images")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for directories")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_dehaze)

    p = sub.add_parser("dump-maps", help="write intermediate transmission maps only")
    p.add_argument("input")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1)
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_dump_maps)

    p = sub.add_parser("synthesize", help="add haze to a clean image")
    p.add_argument("clean")
    p.add_argument("depth", help="depth map (PGM/PNG/PFM) or preset flat:D, ramp:D0:D1, hramp:D0:D1")
    p.add_argument("output")
    p.add_argument("--airlight", default="0.8,0.8,0.8")
    p.add_argument("--scatter", default=",".join(map(str, DEFAULT_SCATTER)))
    p.add_argument("--depth-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("evaluate", help="PSNR/SSIM of restored images against references")
    p.add_argument("restored")
    p.add_argument("reference")
    p.add_argument("--csv", type=Path)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except NonFiniteError as exc:
        log.error("%s", exc)
        return EXIT_NONFINITE
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
