"""JSON, TSV and aligned-text renderings of reports and tables."""
import json

from .errors import UsageError

FORMATS = ("json", "tsv", "text")


def to_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _aligned(rows):
    widths = [max(len(str(row[i])) for row in rows if i < len(row)) for i in range(max(len(r) for r in rows))]
    lines = []
    for row in rows:
        cells = [str(cell).ljust(widths[i]) if i == 0 else str(cell).rjust(widths[i]) for i, cell in enumerate(row)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _tsv(rows):
    return "".join("\t".join(str(cell) for cell in row) + "\n" for row in rows)


def pct(value, digits=2):
    return "n/a" if value is None else f"{100 * value:.{digits}f}%"


def _check(fmt):
    if fmt not in FORMATS:
        raise UsageError(f"output format must be one of {FORMATS}, got {fmt!r}")


def render_report(report, fmt="json"):
    _check(fmt)
    if fmt == "json":
        return to_json(report.to_dict())
    labels = list(report.confusion)
    summary = [
        ("feature_set", report.feature_set),
        ("mode", report.mode),
        ("seed", report.seed),
        ("hint_scope", report.hint_scope),
        ("n_train", report.n_train),
        ("n_eval", report.n_eval),
        ("baseline", f"{report.baseline:.4f}"),
        ("accuracy", f"{report.accuracy:.4f}"),
    ]
    if report.subset is not None:
        for name, cell in report.subset.items():
            acc = "n/a" if cell["accuracy"] is None else f"{cell['accuracy']:.4f}"
            summary.append((f"{name}_accuracy", acc))
            summary.append((f"{name}_n", cell["n"]))
    matrix = [["gold\\predicted"] + labels]
    matrix += [[gold] + [report.confusion[gold][pred] for pred in labels] for gold in labels]
    if fmt == "tsv":
        return _tsv(summary) + _tsv(matrix)
    return _aligned(summary) + "\n" + _aligned(matrix)


def render_table(table, fmt="text"):
    _check(fmt)
    if fmt == "json":
        return to_json(table.to_dict())
    header = ["Predictive accuracy"] + list(table.columns)
    rows = [[label] + [pct(v) for v in values] for label, values in table.rows]
    if fmt == "tsv":
        rows = [[label] + ["" if v is None else f"{v:.4f}" for v in values] for label, values in table.rows]
        return _tsv([header] + rows)
    return table.title + "\n" + _aligned([header] + rows)


def render_phrase_stats(rows, fmt="tsv"):
    _check(fmt)
    if fmt == "json":
        return to_json([{"phrase": r.phrase, "corpus_freq": r.corpus_freq, "signal_freq": r.signal_freq,
                         "likelihood": r.likelihood} for r in rows])
    if fmt == "tsv":
        return _tsv([(r.phrase, r.corpus_freq, r.signal_freq, f"{100 * r.likelihood:.0f}") for r in rows])
    header = ("Phrase", "Corpus freq.", "Occurrences as signal", "Likelihood of being signal")
    return _aligned([header] + [(r.phrase, r.corpus_freq, r.signal_freq, pct(r.likelihood, 0)) for r in rows])


def render_link_counts(rows, fmt="tsv"):
    _check(fmt)
    if fmt == "json":
        return to_json([r.to_dict() for r in rows])
    if fmt == "tsv":
        header = ("corpus", "total_tlinks", "with_signal", "signal_pct", "without_signal",
                  "event_event_total", "event_event_with_signal", "event_event_pct")
        body = [(r.corpus, r.total_tlinks, r.with_signal, f"{r.signal_pct:.1f}", r.without_signal,
                 r.event_event_total, r.event_event_with_signal, f"{r.event_event_pct:.1f}") for r in rows]
        return _tsv([header] + body)
    header = ("Corpus", "Total TLINKs", "With SIGNAL", "", "Without SIGNAL")
    body = []
    for r in rows:
        body.append((r.corpus, r.total_tlinks, r.with_signal, f"({r.signal_pct:.1f}%)", r.without_signal))
    for r in rows[-1:]:
        body.append((f"{r.corpus} event-event", r.event_event_total, r.event_event_with_signal,
                     f"({r.event_event_signal_pct:.1f}%)", r.event_event_total - r.event_event_with_signal))
    return _aligned([header] + body)


def render_bound(inputs, result, fmt="text"):
    _check(fmt)
    data = {"P": inputs.P, "P_n": inputs.P_n, "s": inputs.s, "a": result.a, "in_range": result.in_range}
    if fmt == "json":
        return to_json(data)
    if fmt == "tsv":
        return _tsv(data.items())
    flag = "" if result.in_range else "  (outside [0, 1])"
    return f"a = {result.a:.4f}{flag}\n"
