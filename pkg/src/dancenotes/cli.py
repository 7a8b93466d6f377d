"""Command line surface: synth, offline, baseline, distill, train, eval, serve.

Every command is seeded through flags and writes a JSON manifest of its
configuration and library versions (no timestamps), so re-running a command
with the same manifest reproduces byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np

from .baseline import DEFAULT_PERCENTILE, baseline_generate, fit_threshold
from .evaluation import EvalRow, flatness, next_note_accuracy, sequence_correlation, write_report
from .exceptions import EngineError, InvalidInputError
from .music import NoteSequence, write_midi, write_notes_json
from .offline import SearchConfig, beam_generate
from .online.config import desk_config, paper_config
from .online.examples import Dataset, build_examples, load_dataset, save_dataset
from .online.inference import generate_notes
from .online.training import train
from .online.weights_io import load_params, save_params
from .pose import DEFAULT_FPS, SynthConfig, load_pose_json, synth_dance, write_pose_json


def _versions() -> dict:
    from . import __version__

    return {
        "dancenotes": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }


def _write_manifest(path, command: str, config: dict) -> None:
    """Deterministic run manifest; path None prints to stdout (serve)."""
    text = json.dumps(
        {"command": command, "config": config, "versions": _versions()},
        indent=2,
        sort_keys=True,
    ) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _corpus_files(dir_path) -> list:
    p = Path(dir_path)
    if not p.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {dir_path}")
    files = sorted(f for f in p.glob("*.json") if not f.name.endswith("manifest.json"))
    if not files:
        raise InvalidInputError(f"no pose files in {dir_path}")
    return files


def _load_dance(path, args):
    if not Path(path).exists():
        raise FileNotFoundError(f"pose file not found: {path}")
    return load_pose_json(
        path,
        image_w=getattr(args, "image_width", None),
        image_h=getattr(args, "image_height", None),
        fps=getattr(args, "fps", DEFAULT_FPS),
    )


def _emit_notes(args, notes, fps: int, tag: str) -> NoteSequence:
    seq = NoteSequence(
        notes=np.asarray(notes, dtype=np.int8), k=args.k, fps=fps, generator_tag=tag
    )
    write_notes_json(seq, args.out)
    if getattr(args, "midi", None):
        write_midi(seq, args.midi)
    return seq


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    master = np.random.default_rng(args.seed)
    names = []
    for i in range(args.count):
        cfg = SynthConfig(
            duration_s=args.duration,
            fps=args.fps,
            n_base_poses=int(master.integers(2, 5)),
            motif_len=int(master.integers(4, 9)),
            seed=args.seed + i,
        )
        dance = synth_dance(cfg)
        name = f"dance_{i:04d}.json"
        write_pose_json(dance, out / name)
        names.append(name)
    _write_manifest(
        out / "manifest.json",
        "synth",
        {
            "count": args.count,
            "seed": args.seed,
            "duration": args.duration,
            "fps": args.fps,
            "files": names,
        },
    )
    return 0


def cmd_offline(args) -> int:
    dance = _load_dance(args.poses, args)
    cfg = SearchConfig(k=args.k, beam_width=args.beam, window_notes=args.window_notes)
    notes = beam_generate(dance, cfg)
    _emit_notes(args, notes, dance.fps, "offline")
    corr = sequence_correlation(dance, notes, k=args.k)
    print(f"correlation {corr:.6f}")
    _write_manifest(
        str(args.out) + ".manifest.json",
        "offline",
        {
            "poses": str(args.poses),
            "out": str(args.out),
            "midi": str(args.midi) if args.midi else None,
            "k": args.k,
            "beam": args.beam,
            "window_notes": args.window_notes,
        },
    )
    return 0


def cmd_baseline(args) -> int:
    dance = _load_dance(args.poses, args)
    if args.threshold is not None:
        threshold = args.threshold
    else:
        corpus = [_load_dance(f, args) for f in _corpus_files(args.fit_corpus)]
        threshold = fit_threshold(corpus, k=args.k, percentile=args.percentile)
    notes = baseline_generate(dance, threshold, k=args.k, seed=args.seed)
    _emit_notes(args, notes, dance.fps, "baseline")
    print(f"threshold {threshold:.6f}")
    _write_manifest(
        str(args.out) + ".manifest.json",
        "baseline",
        {
            "poses": str(args.poses),
            "out": str(args.out),
            "midi": str(args.midi) if args.midi else None,
            "k": args.k,
            "threshold": threshold,
            "percentile": args.percentile,
            "fit_corpus": str(args.fit_corpus) if args.fit_corpus else None,
            "seed": args.seed,
        },
    )
    return 0


def cmd_distill(args) -> int:
    cfg = desk_config(window_notes=args.window_notes, window_frames=args.window_notes * args.k)
    search = SearchConfig(k=args.k, beam_width=args.beam, window_notes=args.window_notes)
    examples = []
    files = _corpus_files(args.corpus)
    for f in files:
        dance = _load_dance(f, args)
        notes = beam_generate(dance, search)
        examples.extend(build_examples(dance, notes, cfg))
    ds = Dataset.from_examples(examples)
    save_dataset(args.out, ds)
    print(f"dances {len(files)} examples {len(ds)}")
    _write_manifest(
        str(args.out) + ".manifest.json",
        "distill",
        {
            "corpus": str(args.corpus),
            "out": str(args.out),
            "k": args.k,
            "beam": args.beam,
            "window_notes": args.window_notes,
            "dances": len(files),
            "examples": len(ds),
        },
    )
    return 0


def cmd_train(args) -> int:
    ds = load_dataset(args.data)
    preset = paper_config if args.preset == "paper" else desk_config
    cfg = preset(
        window_frames=int(ds.windows.shape[1]),
        window_notes=int(ds.histories.shape[1]),
        epochs=args.epochs,
        lr=args.lr,
        batch=args.batch,
        seed=args.seed,
    )
    log_fn = None if args.quiet else lambda line: print(line, flush=True)
    params, log = train(ds, cfg, val_fraction=args.val_fraction, log_fn=log_fn)
    save_params(args.out, params)
    log.write_csv(str(args.out) + ".log.csv")
    _write_manifest(
        str(args.out) + ".manifest.json",
        "train",
        {
            "data": str(args.data),
            "out": str(args.out),
            "preset": args.preset,
            "epochs": args.epochs,
            "lr": args.lr,
            "batch": args.batch,
            "seed": args.seed,
            "val_fraction": args.val_fraction,
        },
    )
    return 0


def cmd_eval(args) -> int:
    files = _corpus_files(args.corpus)
    dances = [_load_dance(f, args) for f in files]
    params = load_params(args.model)
    if params.config.k != args.k:
        raise InvalidInputError(
            f"model was trained for k={params.config.k}, eval requested k={args.k}"
        )
    search = SearchConfig(k=args.k, beam_width=args.beam, window_notes=args.window_notes)
    threshold = fit_threshold(dances, k=args.k, percentile=args.percentile)
    rows = []
    for i, (f, dance) in enumerate(zip(files, dances)):
        labels = beam_generate(dance, search)
        outputs = {
            "offline": labels,
            "online": generate_notes(params, dance).notes,
            "baseline": baseline_generate(dance, threshold, k=args.k, seed=args.seed + i),
        }
        for gen in ("offline", "online", "baseline"):
            notes = outputs[gen]
            rows.append(
                EvalRow(
                    video_id=f.stem,
                    generator=gen,
                    correlation=sequence_correlation(dance, notes, k=args.k),
                    accuracy=next_note_accuracy(notes, labels),
                    flatness=flatness(notes),
                )
            )
    write_report(args.report, rows)
    for gen in ("offline", "online", "baseline"):
        vals = [r.correlation for r in rows if r.generator == gen]
        print(f"mean_correlation {gen} {float(np.mean(vals)):.6f}")
    _write_manifest(
        str(args.report) + ".manifest.json",
        "eval",
        {
            "corpus": str(args.corpus),
            "model": str(args.model),
            "report": str(args.report),
            "k": args.k,
            "beam": args.beam,
            "window_notes": args.window_notes,
            "percentile": args.percentile,
            "threshold": threshold,
            "seed": args.seed,
        },
    )
    return 0


def _parse_sampling(text: str):
    if text == "argmax":
        return "argmax", 1.0
    if text.startswith("temp:"):
        try:
            tau = float(text[5:])
        except ValueError:
            raise InvalidInputError(f"bad sampling spec {text!r}") from None
        if tau <= 0:
            raise InvalidInputError("sampling temperature must be positive")
        return "temperature", tau
    raise InvalidInputError(f"bad sampling spec {text!r}; use argmax or temp:<t>")


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    mode, tau = _parse_sampling(args.sampling)
    params = load_params(args.model)
    app = create_app(params, sampling=mode, temperature=tau, seed=args.seed)
    _write_manifest(
        None,
        "serve",
        {
            "model": str(args.model),
            "host": args.host,
            "port": args.port,
            "sampling": args.sampling,
            "seed": args.seed,
            "k": params.config.k,
            "window_frames": params.config.window_frames,
            "window_notes": params.config.window_notes,
        },
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dancenotes", description="Generate pentatonic music from dance pose streams."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic motif-dance corpus")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--duration", type=float, default=12.0)
    p.add_argument("--fps", type=int, default=DEFAULT_FPS)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("offline", help="beam-search notes for a recorded dance")
    p.add_argument("--poses", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--midi", default=None)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--beam", type=int, default=50)
    p.add_argument("--window-notes", dest="window_notes", type=int, default=10)
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_offline)

    p = sub.add_parser("baseline", help="similarity-threshold baseline notes")
    p.add_argument("--poses", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--midi", default=None)
    p.add_argument("--k", type=int, default=6)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--threshold", type=float, default=None)
    group.add_argument("--fit-corpus", dest="fit_corpus", default=None)
    p.add_argument("--percentile", type=float, default=DEFAULT_PERCENTILE)
    p.add_argument("--seed", type=int, default=0)
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("distill", help="label a corpus with beam search, save examples")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--beam", type=int, default=50)
    p.add_argument("--window-notes", dest="window_notes", type=int, default=10)
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("train", help="train the next-note model on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=("desk", "paper"), default="desk")
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=2e-4)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val-fraction", dest="val_fraction", type=float, default=0.1)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="compare offline/online/baseline on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--beam", type=int, default=50)
    p.add_argument("--window-notes", dest="window_notes", type=int, default=10)
    p.add_argument("--percentile", type=float, default=DEFAULT_PERCENTILE)
    p.add_argument("--seed", type=int, default=0)
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the streaming WebSocket service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model", required=True)
    p.add_argument("--sampling", default="argmax", help="argmax or temp:<t>")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_serve)

    return parser


def _add_ingest_flags(p) -> None:
    # only needed when the input is raw estimator output rather than canonical
    p.add_argument("--image-width", dest="image_width", type=float, default=None)
    p.add_argument("--image-height", dest="image_height", type=float, default=None)
    p.add_argument("--fps", type=int, default=DEFAULT_FPS)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
