"""Command-line front end: classify, segment, profile, evaluate, synth."""

import argparse
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import evalkit, raster, synth
from .errors import ImageIOError, InvalidParameter, ManifestResolutionError, ScriptIdError
from .pipeline import PipelineConfig, classify_binary, preprocess
from .profiles import horizontal_profile, vertical_profile
from .segmenter import analyze_page

logger = logging.getLogger("scriptid")

EXIT_OK, EXIT_IO, EXIT_MANIFEST = 0, 2, 3
CONFIG_ENV = "SCRIPTID_CONFIG"

LINE_COLOR = (255, 228, 140)
BOX_COLOR = (220, 30, 30)
LABEL_COLORS = {
    "Kannada": (30, 150, 30),
    "English": (220, 30, 30),
    "Hindi": (30, 60, 220),
    "Unknown": (128, 128, 128),
}


class CliError(Exception):
    def __init__(self, message, code=EXIT_IO):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def build_config(args):
    """Config file (``--config`` or $SCRIPTID_CONFIG), then flag overrides."""
    path = args.config or os.environ.get(CONFIG_ENV)
    cfg = PipelineConfig.from_file(path) if path else PipelineConfig()
    return cfg.with_overrides(
        profile=args.profile,
        ratio_only=True if args.ratio_only else None,
        tau=args.tau,
        min_gap=args.min_gap,
        close=args.close,
        deskew=True if args.deskew else None,
    )


def write_json(document, out=None):
    text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(prefix=".scriptid-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _outline(rgb, rect, color):
    x0, y0, x1, y1 = rect
    rgb[y0, x0:x1 + 1] = color
    rgb[y1, x0:x1 + 1] = color
    rgb[y0:y1 + 1, x0] = color
    rgb[y0:y1 + 1, x1] = color


def render_overlay(binary, lines, boxes):
    """RGB debug image: tinted line bands and outlined word boxes.

    ``boxes`` is a sequence of ``(rect, color)``.
    """
    rgb = np.full(binary.shape + (3,), 255, dtype=np.uint8)
    for band in lines:
        rgb[band.y_top:band.y_bottom + 1] = LINE_COLOR
    rgb[binary == 1] = 0
    for rect, color in boxes:
        _outline(rgb, rect, color)
    return rgb


def render_histogram(binary, hcounts, vcounts):
    """Page with its row histogram to the right and column histogram below."""
    h, w = binary.shape
    hw = max(hcounts) if hcounts else 0
    vh = max(vcounts) if vcounts else 0
    rgb = np.full((h + vh + 1, w + hw + 1, 3), 255, dtype=np.uint8)
    rgb[:h, :w][binary == 1] = 0
    for y, c in enumerate(hcounts):
        rgb[y, w + 1:w + 1 + c] = BOX_COLOR
    for x, c in enumerate(vcounts):
        rgb[h + 1:h + 1 + c, x] = LABEL_COLORS["Hindi"]
    return rgb


def ascii_histogram(counts, width=60):
    top = max(counts) if counts else 0
    scale = width / top if top > width else 1
    return "\n".join(f"{i:5d} {c:5d} " + "#" * int(round(c * scale)) for i, c in enumerate(counts))


def _overlay_path(directory, image, suffix):
    os.makedirs(directory, exist_ok=True)
    stem = os.path.splitext(os.path.basename(image))[0]
    return os.path.join(directory, f"{stem}.{suffix}.png")


def _map_images(func, images, jobs):
    if jobs > 1 and len(images) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, images))
    return [func(i) for i in images]


def _emit(docs, args):
    write_json(docs[0] if len(docs) == 1 else docs, args.json)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args):
    cfg = build_config(args)
    word_jobs = args.jobs if len(args.images) == 1 else 1

    def run(image):
        binary, angle = preprocess(raster.load_image(image), cfg)
        results = classify_binary(binary, cfg, jobs=word_jobs)
        doc = {"image": image, "config_echo": cfg.to_dict(),
               "words": [r.to_dict() for r in results]}
        if cfg.deskew:
            doc["deskew_angle"] = angle
        if args.overlay:
            seg_lines = analyze_page(binary, cfg.segmenter_config()).lines
            boxes = [(r.box.rect, LABEL_COLORS[r.label.value]) for r in results]
            raster.save_png(render_overlay(binary, seg_lines, boxes),
                            _overlay_path(args.overlay, image, "overlay"))
        return doc

    _emit(_map_images(run, args.images, args.jobs), args)
    return EXIT_OK


def cmd_segment(args):
    cfg = build_config(args)

    def run(image):
        binary, angle = preprocess(raster.load_image(image), cfg)
        seg = analyze_page(binary, cfg.segmenter_config())
        doc = {"image": image, "config_echo": cfg.to_dict(), **seg.to_dict()}
        if cfg.deskew:
            doc["deskew_angle"] = angle
        if args.overlay:
            boxes = [(w.rect, BOX_COLOR) for w in seg.words]
            raster.save_png(render_overlay(binary, seg.lines, boxes),
                            _overlay_path(args.overlay, image, "overlay"))
        return doc

    _emit(_map_images(run, args.images, args.jobs), args)
    return EXIT_OK


def _parse_region(text):
    if text is None:
        return None
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        parts = []
    if len(parts) != 4:
        raise CliError(f"--region expects x0,y0,x1,y1, got {text!r}")
    return tuple(parts)


def cmd_profile(args):
    cfg = build_config(args)
    # profiles are measured on the plain binarized page unless --close is given
    cfg = cfg.with_overrides(close=bool(args.close))
    region = _parse_region(args.region)

    def run(image):
        binary, _ = preprocess(raster.load_image(image), cfg)
        hp = horizontal_profile(binary, region)
        vp = vertical_profile(binary, region)
        x0, y0, x1, y1 = hp.region
        if args.ascii:
            sys.stderr.write(f"{image}: horizontal\n{ascii_histogram(hp.counts)}\n")
            sys.stderr.write(f"{image}: vertical\n{ascii_histogram(vp.counts)}\n")
        if args.overlay:
            sub = binary[y0:y1 + 1, x0:x1 + 1]
            raster.save_png(render_histogram(sub, hp.counts, vp.counts),
                            _overlay_path(args.overlay, image, "profile"))
        return {"image": image, "region": {"x0": x0, "y0": y0, "x1": x1, "y1": y1},
                "horizontal": list(hp.counts), "vertical": list(vp.counts)}

    _emit(_map_images(run, args.images, args.jobs), args)
    return EXIT_OK


def cmd_evaluate(args):
    cfg = build_config(args)
    manifest = evalkit.load_manifest(args.manifest)
    report = evalkit.evaluate(manifest, cfg, jobs=args.jobs, strict=False)
    if args.json or not args.table:
        write_json(report.to_dict(), args.json)
    if args.table:
        sys.stdout.write(report.format_table() + "\n")
    if report.unresolved:
        for item in report.unresolved:
            print(f"scriptid: unresolved: {item}", file=sys.stderr)
        return EXIT_MANIFEST
    return EXIT_OK


def cmd_synth(args):
    os.makedirs(args.out, exist_ok=True)
    ext = args.format
    save = raster.save_png if ext == "png" else raster.save_pgm

    if args.broken_stem:
        gray, box = synth.make_broken_stem_page()
        name = f"broken_stem.{ext}"
        save(gray, os.path.join(args.out, name))
        x0, y0, x1, y1 = box
        write_json({"image": name, "expected_words": 1,
                    "box": {"x0": x0, "y0": y0, "x1": x1, "y1": y1}},
                   os.path.join(args.out, "broken_stem.json"))
        return EXIT_OK

    if args.pages is not None:
        specs = [synth.random_fixture(synth.word_seed(args.seed, p, 0), args.lines,
                                      args.words_per_line) for p in range(args.pages)]
    else:
        specs = synth.make_suite(args.per_class, args.seed, args.lines, args.words_per_line)
    entries = []
    for p, spec in enumerate(specs):
        gray, entry = synth.make_page(spec)
        name = f"page_{p:03d}.{ext}"
        save(gray, os.path.join(args.out, name))
        entries.append(evalkit.ManifestEntry(name, entry.words))
    evalkit.save_manifest(evalkit.Manifest(tuple(entries)), os.path.join(args.out, "manifest.json"))
    logger.info("wrote %d page(s) to %s", len(specs), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _pipeline_flags():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("pipeline options")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--profile", choices=("table1", "alg6"), help="named Lp/Lm range set")
    g.add_argument("--ratio-only", action="store_true", help="ignore the stroke-count gates")
    g.add_argument("--tau", type=float, help="stroke height fraction in (0, 1]")
    g.add_argument("--min-gap", type=int, help="columns of whitespace that separate words")
    g.add_argument("--close", action=argparse.BooleanOptionalAction, default=None,
                   help="apply a morphological closing before segmentation")
    g.add_argument("--deskew", action="store_true", help="search and correct small page skew")
    g.add_argument("--overlay", metavar="DIR", help="write debug PNGs to DIR")
    g.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")
    g.add_argument("--json", metavar="OUT", help="write JSON output to OUT instead of stdout")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="scriptid",
        description="Segment scanned pages into words and identify Kannada, English or Hindi script.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _pipeline_flags()

    p = sub.add_parser("classify", parents=[common], help="label every word on the page(s)")
    p.add_argument("images", nargs="+")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("segment", parents=[common], help="emit line bands and word boxes")
    p.add_argument("images", nargs="+")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("profile", parents=[common], help="dump projection profiles")
    p.add_argument("images", nargs="+")
    p.add_argument("--region", help="x0,y0,x1,y1 inclusive (default: whole page)")
    p.add_argument("--ascii", action="store_true", help="print ASCII histograms to stderr")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("evaluate", parents=[common], help="score a ground-truth manifest")
    p.add_argument("manifest")
    p.add_argument("--table", action="store_true", help="print the confusion table")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="write synthetic fixture pages and a manifest")
    p.add_argument("out", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-class", type=int, default=30, help="words per script (suite mode)")
    p.add_argument("--pages", type=int, help="random-label pages instead of a balanced suite")
    p.add_argument("--lines", type=int, default=3)
    p.add_argument("--words-per-line", type=int, default=5)
    p.add_argument("--format", choices=("png", "pgm"), default="png")
    p.add_argument("--broken-stem", action="store_true", help="write the broken-glyph fixture")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s: %(message)s")
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"scriptid: {exc}", file=sys.stderr)
        return exc.code
    except ManifestResolutionError as exc:
        print(f"scriptid: {exc}", file=sys.stderr)
        return EXIT_MANIFEST
    except (OSError, ImageIOError, InvalidParameter, json.JSONDecodeError) as exc:
        print(f"scriptid: {exc}", file=sys.stderr)
        return EXIT_IO
    except ScriptIdError as exc:
        print(f"scriptid: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
