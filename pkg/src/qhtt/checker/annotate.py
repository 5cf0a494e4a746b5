"""Interleave checker states with source text as ``-- {prop}`` comment lines."""

from __future__ import annotations

from ..surface import ast as A


def _indent(line):
    return line[: len(line) - len(line.lstrip())]


def _merge(per_case):
    """``[(label, [text, ...]), ...]`` -> lines, labelled only where cases disagree."""
    if not per_case:
        return []
    texts = [t for _, t in per_case]
    if all(t == texts[0] for t in texts):
        return list(texts[0])
    out = []
    for label, lines in per_case:
        out.extend(f"[{label}] {t}" for t in lines)
    return out


def _step_lines(step):
    if step.notes and step.notes != [step.prop]:
        return [f"{{{n}}}" for n in step.notes] + [f"⇔ {{{step.prop}}}"]
    return [f"{{{step.prop}}}"]


def annotate(source: str, program: A.Program, reports) -> str:
    """Return ``source`` with a proposition comment after every top-level statement."""
    lines = source.replace("\r\n", "\n").split("\n")
    inserts: dict[int, list[str]] = {}
    by_name = {r.name: r for r in reports}
    for decl in program.decls:
        rep = by_name.get(decl.name)
        body = decl.body
        while isinstance(body, A.Lambda):
            body = body.body
        if rep is None or not rep.cases or not isinstance(body, A.Do) or body.span is None:
            continue
        start = body.span.line
        first = _first_stmt_line(body.body, lines, start)
        inserts.setdefault(start, []).append(
            (_indent(lines[first - 1]) if first else "  ",
             _merge([(c.label, [f"{{{c.initial_prop}}}"]) for c in rep.cases])))
        nsteps = max(len(c.steps) for c in rep.cases)
        for i in range(nsteps):
            per_case = [(c.label, _step_lines(c.steps[i])) for c in rep.cases if i < len(c.steps)]
            step = next(c.steps[i] for c in rep.cases if i < len(c.steps))
            if step.span is None:
                continue
            inserts.setdefault(step.span.end_line, []).append((_indent(lines[step.span.line - 1]), _merge(per_case)))
    out = []
    for no, line in enumerate(lines, 1):
        out.append(line)
        for indent, texts in inserts.get(no, []):
            out.extend(f"{indent}-- {t}" for t in texts)
    return "\n".join(out)


def _first_stmt_line(comp, lines, start):
    span = getattr(comp, "span", None)
    if span is not None and span.line != start:
        return span.line
    return start + 1 if start < len(lines) and lines[start].strip() not in ("", "}") else None
