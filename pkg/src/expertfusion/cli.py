"""Command-line entry point: index, search, evaluate, compare, synth."""

from __future__ import annotations

import argparse
import gzip
import io
import json
import logging
import sys
from pathlib import Path

from .corpus import CorpusError, Index, Publication, build_index, load_corpus, write_corpus
from .evaluation import (
    EvalReport,
    evaluate_run,
    load_qrels,
    randomization_test,
    read_report,
    write_qrels,
)
from .fusion import METHODS
from .pipeline import EVIDENCE_MODES, RunConfig, SearchResult, search
from .sensors import SENSOR_KINDS

logger = logging.getLogger("expertfusion")

INDEX_MAGIC = "expertfusion-index"
INDEX_VERSION = 1
SIGNIFICANCE_LEVEL = 0.1


def save_index(pubs: list[Publication], path: str | Path) -> None:
    """Gzipped JSON of the source records; mtime pinned so rebuilds are byte-identical."""
    payload = {
        "format": INDEX_MAGIC,
        "version": INDEX_VERSION,
        "publications": [p.to_record() for p in pubs],
    }
    data = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    buf = io.BytesIO()
    with gzip.GzipFile(filename="", mode="wb", fileobj=buf, mtime=0) as gz:
        gz.write(data.encode("utf-8"))
    Path(path).write_bytes(buf.getvalue())


def load_index(path: str | Path) -> Index:
    try:
        payload = json.loads(gzip.decompress(Path(path).read_bytes()).decode("utf-8"))
    except (OSError, ValueError) as exc:
        raise CorpusError(f"{path}: not a readable index artifact ({exc})") from None
    if payload.get("format") != INDEX_MAGIC or payload.get("version") != INDEX_VERSION:
        raise CorpusError(f"{path}: unsupported index format or version")
    pubs = [
        Publication(
            pub_id=r["pub_id"],
            title=r["title"],
            abstract=r["abstract"],
            author_ids=tuple(r["authors"]),
            year=r["year"],
            venue=r["venue"],
            venue_kind=r["venue_kind"],
            references=tuple(r["references"]),
        )
        for r in payload["publications"]
    ]
    return build_index(pubs)


def _config(args) -> RunConfig:
    sensors = tuple(s.strip() for s in args.sensors.split(",") if s.strip())
    return RunConfig(
        sensors=sensors,
        fusion=args.fusion,
        evidence=args.evidence,
        depth=args.k,
        verbose=getattr(args, "verbose", False),
    )


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def format_search(result: SearchResult, config: RunConfig) -> str:
    out = []
    if config.verbose and result.reports:
        for r in result.reports:
            out.append(
                "\t".join(
                    ["#sensor", r.sensor_kind, f"H={_fmt(r.entropy)}", f"MaxH={_fmt(r.max_entropy)}",
                     f"ratio={_fmt(r.weight)}", f"theta={_fmt(r.mass.theta_mass)}"]
                )
            )
            for a in r.mass.frame:
                out.append("\t".join(["#mass", r.sensor_kind, a, _fmt(r.mass[a])]))
        for i, k in enumerate(result.conflicts, start=1):
            out.append("\t".join(["#conflict", str(i), _fmt(k)]))
        if result.final_mass is not None:
            out.append("\t".join(["#final", "theta", _fmt(result.final_mass.theta_mass)]))
    out.append("rank\tauthor_id\tscore")
    for i, (a, s) in enumerate(result.ranking.entries[: config.depth], start=1):
        out.append(f"{i}\t{a}\t{s:.6f}")
    return "\n".join(out) + "\n"


def cmd_index(args) -> int:
    loaded = load_corpus(args.corpus)
    index = build_index(loaded.publications)
    save_index(loaded.publications, args.out)
    stats = index.stats()
    stats["self_citations_dropped"] = loaded.self_citations_dropped
    stats["dangling_references"] = loaded.dangling_references
    for key, value in stats.items():
        print(f"{key}\t{value}")
    return 0


def cmd_search(args) -> int:
    config = _config(args)
    index = load_index(args.index)
    result = search(index, args.query, config)
    if not result.ranking.entries:
        print(f"warning: no candidates found for {args.query!r}", file=sys.stderr)
    sys.stdout.write(format_search(result, config))
    return 0


def run_evaluation(index: Index, qrels: dict[str, set[str]], config: RunConfig) -> EvalReport:
    rankings = {}
    for query in qrels:
        try:
            rankings[query] = search(index, query, config).ranking
        except ValueError as exc:
            logger.warning("query %r: %s", query, exc)
            rankings[query] = ()
    return evaluate_run(rankings, qrels, depth=config.depth)


def cmd_evaluate(args) -> int:
    config = _config(args)
    index = load_index(args.index)
    qrels = {q: rel for q, rel in load_qrels(args.qrels).items() if rel}
    report = run_evaluation(index, qrels, config)
    text = report.to_tsv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    a, b = read_report(args.a), read_report(args.b)
    if set(a) != set(b):
        only_a = sorted(set(a) - set(b))
        only_b = sorted(set(b) - set(a))
        raise ValueError(f"query sets differ: only in A {only_a}, only in B {only_b}")
    queries = list(a)
    exact = {"auto": None, "exact": True, "mc": False}[args.mode]
    p = randomization_test(
        [a[q] for q in queries], [b[q] for q in queries], args.iterations, args.seed, exact
    )
    print("query\tAP_a\tAP_b\tdelta")
    for q in queries:
        print(f"{q}\t{a[q]:.4f}\t{b[q]:.4f}\t{a[q] - b[q]:+.4f}")
    star = "*" if p < SIGNIFICANCE_LEVEL else ""
    print(f"p_value\t{p:.6f}{star}")
    return 0


def cmd_synth(args) -> int:
    from .synthetic import generate

    bench = generate(seed=args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(bench.publications, out / "corpus.jsonl")
    write_qrels(bench.qrels, out / "qrels.tsv")
    print(f"publications\t{len(bench.publications)}")
    print(f"queries\t{len(bench.qrels)}")
    return 0


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--index", required=True, help="index artifact from the index command")
    p.add_argument(
        "--sensors",
        default="text,citation",
        help=f"comma-separated subset of {','.join(SENSOR_KINDS)} (text,profile suits abstract-rich corpora)",
    )
    p.add_argument("--fusion", choices=METHODS, default="combsum")
    p.add_argument("--evidence", choices=EVIDENCE_MODES, default="ds")
    p.add_argument("--k", type=int, default=100, help="ranking depth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expertfusion", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index artifact from a corpus file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="rank experts for one query")
    _add_run_flags(p)
    p.add_argument("--query", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("evaluate", help="score every qrels query")
    _add_run_flags(p)
    p.add_argument("--qrels", required=True)
    p.add_argument("--out", help="also write the report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="paired randomization test between two reports")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("auto", "exact", "mc"), default="auto")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="write the synthetic benchmark corpus and qrels")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
