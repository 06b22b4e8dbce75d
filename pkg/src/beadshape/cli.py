"""Command line for every pipeline stage.

Exit codes: 0 success, 1 domain error (bad values, unprintable params,
divergence), 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .contour import read_contour, write_contour
from .exceptions import DomainError
from .features import extract, features_csv
from .fourier import FourierShape, fit, sample
from .network import NetworkConfig, TrainedModel, train
from .params import PrintParams
from .pipeline import predict_response
from .printability import RheologyExtras, check_all
from .surrogate import SurrogateConfig, build_dataset, load_dataset, split_arrays


def _load_json_arg(text: str) -> dict:
    """Accept either inline JSON or a path to a JSON file."""
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)


def _dump(doc: dict, out: str | None) -> None:
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _network_config(args) -> NetworkConfig:
    overrides = dict(_load_json_arg(args.config)) if args.config else {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "harmonics", None) is not None:
        overrides["n_harmonics"] = args.harmonics
    base = NetworkConfig().to_dict()
    unknown = set(overrides) - set(base)
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    base.update(overrides)
    return NetworkConfig.from_dict(base)


def cmd_dataset_generate(args) -> int:
    cfg = None
    if args.config:
        cfg = SurrogateConfig(**_load_json_arg(args.config))
    manifest = build_dataset(args.out, n=args.n, layers=args.layers,
                             seed=args.seed if args.seed is not None else 0,
                             config=cfg)
    sys.stdout.write(
        f"wrote {manifest['n_printable']} records to {args.out} "
        f"(split {manifest['split_counts']})\n")
    return 0


def cmd_fourier_fit(args) -> int:
    pts = read_contour(args.contour)
    resample = None if args.resample == 0 else args.resample
    shape = fit(pts, args.harmonics, resample=resample)
    _dump(shape.to_dict(), args.out)
    return 0


def cmd_fourier_sample(args) -> int:
    shape = FourierShape.from_dict(_load_json_arg(args.shape))
    curve = sample(shape, args.n_points)
    if args.out:
        write_contour(args.out, curve.points)
    else:
        for x, y in curve.points.tolist():
            sys.stdout.write(f"{x!r},{y!r}\n")
    return 0


def cmd_train(args) -> int:
    manifest = load_dataset(args.dataset)
    layers = manifest["layers"]
    cfg = _network_config(args)
    if args.harmonics is None and layers == 2:
        # two beads need the wider default basis
        d = cfg.to_dict()
        d["n_harmonics"] = 16
        cfg = NetworkConfig.from_dict(d)
    Xtr, Ctr = split_arrays(manifest, "train")
    Xva, Cva = split_arrays(manifest, "validation")
    model, report = train(Xtr, Ctr, Xva, Cva, cfg, layers=layers)
    model.save(args.out)
    sys.stdout.write(
        f"trained {report.epochs_run} epochs; best epoch "
        f"{report.best_epoch} with validation error "
        f"{report.best_validation_error:.6f} mm; model saved to {args.out}\n")
    return 0


def cmd_predict(args) -> int:
    model = TrainedModel.load(args.model)
    params = PrintParams.from_dict(_load_json_arg(args.params))
    extras = RheologyExtras.from_dict(_load_json_arg(args.extras)) \
        if args.extras else None
    response = predict_response(model, params, extras=extras,
                                n_points=args.n_points, mode=args.mode)
    _dump(response, args.out)
    return 0


def cmd_features(args) -> int:
    pts = read_contour(args.contour)
    fs = extract(pts, layers=args.layers)
    if args.csv:
        sys.stdout.write(features_csv(fs))
    else:
        _dump(fs.to_dict(), args.out)
    return 0


def cmd_check(args) -> int:
    params = PrintParams.from_dict(_load_json_arg(args.params))
    extras = RheologyExtras.from_dict(_load_json_arg(args.extras)) \
        if args.extras else None
    report = check_all(params, extras)
    _dump(report.to_dict(), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    models = {}
    for path in args.model:
        m = TrainedModel.load(path)
        if m.layers in models:
            raise DomainError(f"two models for layers={m.layers}")
        models[m.layers] = m
    app = create_app(models)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="beadshape",
        description="Predict extruded filament cross-sections and screen "
                    "printability.")
    sub = p.add_subparsers(dest="command", required=True)

    ds = sub.add_parser("dataset", help="synthetic dataset tools")
    ds_sub = ds.add_subparsers(dest="subcommand", required=True)
    g = ds_sub.add_parser("generate", help="LHS-sample and write a dataset")
    g.add_argument("--out", required=True)
    g.add_argument("--n", type=int, default=184)
    g.add_argument("--layers", type=int, choices=(1, 2), default=1)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--config", help="SurrogateConfig JSON (inline or path)")
    g.set_defaults(func=cmd_dataset_generate)

    fr = sub.add_parser("fourier", help="descriptor fit / sample tools")
    fr_sub = fr.add_subparsers(dest="subcommand", required=True)
    ff = fr_sub.add_parser("fit", help="fit descriptors to a contour file")
    ff.add_argument("--contour", required=True)
    ff.add_argument("--harmonics", type=int, default=8)
    ff.add_argument("--resample", type=int, default=512,
                    help="resampling density (0 keeps the vertex spacing)")
    ff.add_argument("--out")
    ff.set_defaults(func=cmd_fourier_fit)
    fs_ = fr_sub.add_parser("sample", help="sample a descriptor JSON")
    fs_.add_argument("--shape", required=True,
                     help="FourierShape JSON (inline or path)")
    fs_.add_argument("--n-points", type=int, default=256)
    fs_.add_argument("--out")
    fs_.set_defaults(func=cmd_fourier_sample)

    tr = sub.add_parser("train", help="train a model on a dataset directory")
    tr.add_argument("--dataset", required=True)
    tr.add_argument("--out", required=True)
    tr.add_argument("--config", help="NetworkConfig JSON (inline or path)")
    tr.add_argument("--seed", type=int, default=None)
    tr.add_argument("--harmonics", type=int, default=None)
    tr.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="predict a contour from parameters")
    pr.add_argument("--model", required=True)
    pr.add_argument("--params", required=True,
                    help="PrintParams JSON (inline or path)")
    pr.add_argument("--extras", help="RheologyExtras JSON (inline or path)")
    pr.add_argument("--n-points", type=int, default=None)
    pr.add_argument("--mode", choices=("warn", "strict"), default="warn")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_predict)

    fe = sub.add_parser("features", help="measure a contour file")
    fe.add_argument("--contour", required=True)
    fe.add_argument("--layers", type=int, choices=(1, 2), default=1)
    fe.add_argument("--csv", action="store_true")
    fe.add_argument("--out")
    fe.set_defaults(func=cmd_features)

    ck = sub.add_parser("check", help="run the printability screens")
    ck.add_argument("--params", required=True,
                    help="PrintParams JSON (inline or path)")
    ck.add_argument("--extras", help="RheologyExtras JSON (inline or path)")
    ck.add_argument("--out")
    ck.set_defaults(func=cmd_check)

    sv = sub.add_parser("serve", help="run the HTTP inference service")
    sv.add_argument("--model", action="append", required=True,
                    help="model file; repeat for a second layer mode")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: bad JSON ({exc})\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
