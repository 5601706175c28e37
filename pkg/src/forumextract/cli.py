"""Command line interface: ``extract`` one page, or ``eval`` a gold corpus.

Exit codes: 0 success, 2 no repeating post structure found, 1 for I/O,
parse, usage and corpus-load failures. Evaluation scores are data, not
errors; low scores still exit 0.

The HARVEST_CONFIG environment variable may point to a JSON file overriding
the defaults (keys: min_post_count, blacklist, ancestor_discount,
user_agent); command line flags override the file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timedelta
from pathlib import Path

import requests

from .datescan import parse_iso8601
from .errors import (
    CorpusEmptyError,
    EncodingError,
    ForumExtractError,
    NoPostsFound,
    UrlError,
)
from .evaluate import (
    FAMILIES,
    METADATA_FIELDS,
    MetricReport,
    aggregate,
    load_gold_corpus,
    score_metadata_values,
    score_texts,
)
from .locator import DEFAULT_TAG_BLACKLIST, LocatorConfig
from .pipeline import ExtractionResult, extract

__all__ = ["main"]

DEFAULT_USER_AGENT = "forumextract/0.1"

# Used when eval has no --now and the gold corpus carries no dates at all.
_EVAL_NOW_FALLBACK = datetime(2100, 1, 1)

_FAMILY_ALIASES = {"lev": "levenshtein", "levenshtein": "levenshtein",
                   "jaccard": "jaccard", "token": "token"}


class _Parser(argparse.ArgumentParser):
    # usage problems map to exit 1, keeping 2 reserved for NoPostsFound
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_file_config() -> dict:
    path = os.environ.get("HARVEST_CONFIG")
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    return data


def _locator_config(args, file_cfg: dict) -> LocatorConfig:
    min_post_count = args.min_post_count
    if min_post_count is None:
        min_post_count = int(file_cfg.get("min_post_count", 3))
    if args.blacklist is not None:
        blacklist = frozenset(
            t.strip().lower() for t in args.blacklist.split(",") if t.strip()
        )
    elif "blacklist" in file_cfg:
        blacklist = frozenset(str(t).lower() for t in file_cfg["blacklist"])
    else:
        blacklist = DEFAULT_TAG_BLACKLIST
    discount = float(file_cfg.get("ancestor_discount", 10.0))
    return LocatorConfig(min_post_count=min_post_count,
                         tag_blacklist=blacklist,
                         ancestor_discount=discount)


def _fetch(url: str, user_agent: str) -> tuple[bytes, str]:
    headers = {"User-Agent": user_agent}
    last_error: Exception | None = None
    for _ in range(2):  # one retry
        try:
            response = requests.get(url, headers=headers, timeout=30)
            response.raise_for_status()
            return response.content, str(response.url)
        except requests.RequestException as exc:
            last_error = exc
    raise OSError(f"could not fetch {url}: {last_error}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _result_json(page_url: str, result: ExtractionResult) -> str:
    payload = {
        "url": page_url,
        "post_xpath": str(result.post_xpath),
        "posts": [
            {
                "index": post.index,
                "text": post.text,
                "user": post.user,
                "date": post.date.isoformat() if post.date else None,
                "url": post.url,
            }
            for post in result.posts
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _result_text(page_url: str, result: ExtractionResult) -> str:
    lines = [f"url: {page_url}", f"post_xpath: {result.post_xpath}",
             f"posts: {len(result.posts)}"]
    for post in result.posts:
        lines.append("-" * 40)
        lines.append(
            f"[{post.index}] user={post.user or '-'} "
            f"date={post.date.isoformat() if post.date else '-'} "
            f"url={post.url or '-'}"
        )
        lines.append(post.text)
    for diag in result.diagnostics:
        lines.append(f"# {diag.stage}: {diag.message}")
    return "\n".join(lines) + "\n"


def cmd_extract(args) -> int:
    file_cfg = _load_file_config()
    cfg = _locator_config(args, file_cfg)
    user_agent = str(file_cfg.get("user_agent", DEFAULT_USER_AGENT))

    source = args.input
    if source.startswith(("http://", "https://")):
        data, final_url = _fetch(source, user_agent)
        page_url = args.url or final_url
    else:
        if not args.url:
            print("error: --url is required when the input is a file",
                  file=sys.stderr)
            return 1
        data = Path(source).read_bytes()
        page_url = args.url

    now = parse_iso8601(args.now) if args.now else datetime.now()
    try:
        result = extract(data, page_url, cfg, now=now)
    except NoPostsFound as exc:
        print(f"no posts found: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        _emit(_result_json(page_url, result), args.out)
    else:
        _emit(_result_text(page_url, result), args.out)
    return 0


def _report_dict(report: MetricReport, names: list[str]) -> dict:
    return {
        "micro": {"precision": report.micro[0], "recall": report.micro[1],
                  "f1": report.micro[2]},
        "macro": {"precision": report.macro[0], "recall": report.macro[1],
                  "f1": report.macro[2]},
        "documents": len(report.per_document),
        "per_document": [
            {"name": name, "precision": s.precision, "recall": s.recall,
             "f1": s.f1}
            for name, s in zip(names, report.per_document)
        ],
    }


def _report_table(reports: list[MetricReport]) -> str:
    header = f"{'family':<14}{'mP':>7}{'mR':>7}{'mF1':>7}{'MP':>7}{'MR':>7}{'MF1':>7}"
    rows = [header]
    for report in reports:
        mp, mr, mf1 = report.micro
        gp, gr, gf1 = report.macro
        rows.append(
            f"{report.label:<14}{mp:>7.2f}{mr:>7.2f}{mf1:>7.2f}"
            f"{gp:>7.2f}{gr:>7.2f}{gf1:>7.2f}"
        )
    return "\n".join(rows) + "\n"


def cmd_eval(args) -> int:
    file_cfg = _load_file_config()
    cfg = _locator_config(args, file_cfg)
    try:
        documents, load_errors = load_gold_corpus(args.gold_dir)
    except CorpusEmptyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    documents.sort(key=lambda d: d.name)

    if args.now:
        now = parse_iso8601(args.now)
    else:
        gold_dates = [p.datetime for d in documents for p in d.posts
                      if p.datetime is not None]
        now = max(gold_dates) + timedelta(days=1) if gold_dates \
            else _EVAL_NOW_FALLBACK

    families = []
    for raw in (args.families.split(",") if args.families else FAMILIES):
        name = _FAMILY_ALIASES.get(raw.strip().lower())
        if name is None:
            print(f"error: unknown metric family {raw!r}", file=sys.stderr)
            return 1
        if name not in families:
            families.append(name)

    failures: list[tuple[str, str]] = []
    extractions: dict[str, ExtractionResult | None] = {}
    for gold in documents:
        try:
            data = gold.html_path.read_bytes()
            extractions[gold.name] = extract(data, gold.url, cfg, now=now)
        except (NoPostsFound, OSError, ForumExtractError) as exc:
            failures.append((gold.name, f"{type(exc).__name__}: {exc}"))
            extractions[gold.name] = None

    def extracted_posts(name: str):
        result = extractions[name]
        return list(result.posts) if result is not None else []

    family_reports: list[MetricReport] = []
    for family in families:
        scores = []
        for gold in documents:
            gold_texts = [p.text for p in gold.posts if p.text.strip()]
            extracted = [p.text for p in extracted_posts(gold.name)]
            scores.append(score_texts(gold_texts, extracted, family))
        family_reports.append(aggregate(scores, family))

    metadata_reports: dict[str, MetricReport] = {}
    metadata_names: dict[str, list[str]] = {}
    gold_attr = {"user": "user", "date": "datetime", "url": "post_url"}
    extracted_attr = {"user": "user", "date": "date", "url": "url"}
    for field in METADATA_FIELDS:
        scores = []
        names = []
        for gold in documents:
            gold_values = [getattr(p, gold_attr[field]) for p in gold.posts]
            values = [getattr(p, extracted_attr[field])
                      for p in extracted_posts(gold.name)]
            score = score_metadata_values(gold_values, values, field)
            if score is not None:
                scores.append(score)
                names.append(gold.name)
        metadata_reports[field] = aggregate(scores, "token", label=field)
        metadata_names[field] = names

    doc_names = [d.name for d in documents]
    bundle = {
        "corpus": str(args.gold_dir),
        "now": now.isoformat(),
        "documents": doc_names,
        "load_errors": [list(e) for e in load_errors],
        "extraction_failures": [list(f) for f in failures],
        "families": {
            report.metric_family: _report_dict(report, doc_names)
            for report in family_reports
        },
        "metadata": {
            field: _report_dict(metadata_reports[field],
                                metadata_names[field])
            for field in METADATA_FIELDS
        },
    }

    if args.format == "json":
        _emit(json.dumps(bundle, ensure_ascii=False, indent=2) + "\n",
              args.out)
    else:
        table = _report_table(
            family_reports + [metadata_reports[f] for f in METADATA_FIELDS]
        )
        _emit(table, args.out)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="forumextract",
                     description="Extract forum posts and metadata from "
                                 "HTML pages.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser) -> None:
        p.add_argument("--min-post-count", type=int, default=None,
                       help="candidates must match strictly more elements "
                            "than this (default 3)")
        p.add_argument("--blacklist", default=None,
                       help="comma-separated tag blacklist replacing the "
                            "default")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--now", default=None,
                       help="ISO-8601 reference time for the future-date "
                            "filter")
        p.add_argument("--out", default=None, help="write output to a file")

    p_extract = sub.add_parser("extract", help="extract one page")
    p_extract.add_argument("input", help="HTML file path or http(s) URL")
    p_extract.add_argument("--url", default=None,
                           help="page URL (required for file input)")
    common(p_extract)
    p_extract.set_defaults(func=cmd_extract)

    p_eval = sub.add_parser("eval", help="score extraction against a gold "
                                         "corpus directory")
    p_eval.add_argument("gold_dir", help="directory of <name>.html + "
                                         "<name>.json pairs")
    p_eval.add_argument("--families", default=None,
                        help="comma list from: lev, jaccard, token "
                             "(default: all)")
    common(p_eval)
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, UrlError, EncodingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
