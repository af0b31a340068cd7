from __future__ import annotations

import os
from datetime import datetime
from typing import Any, List

from reportlab.lib import colors
from reportlab.lib.pagesizes import LETTER
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer
from reportlab.platypus.flowables import KeepTogether

from ptolab.engine.pdf_style import PASS_INK, rule, striped_table, stylesheet
from ptolab.types import CheckFinding, CheckSelection

SEPARATOR_LINE = "─" * 96

# equality lists can run into the thousands on symmetric inputs
MAX_LISTED_QUADRUPLES = 20


def _fmt_value(value: Any) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (tuple, list)) and value and all(isinstance(x, str) for x in value):
        return "(" + ", ".join(value) + ")"
    return str(value)


def _status(finding: CheckFinding) -> str:
    return "PASS" if finding.passed else "FAIL"


def _detail_rows(finding: CheckFinding) -> List[List[str]]:
    rows = []
    for key, value in finding.details.items():
        if key == "equality_quadruples":
            continue
        if isinstance(value, dict):
            value = f"{len(value)} entries" if value else "none"
        rows.append([key.replace("_", " "), _fmt_value(value)])
    return rows


def _equality_lines(selection: CheckSelection) -> List[str]:
    ptolemy = next((f for f in selection.findings if f.name == "ptolemy"), None)
    if ptolemy is None:
        return []
    quads = ptolemy.details.get("equality_quadruples") or []
    out = [f"  = ({', '.join(q)})" for q in quads[:MAX_LISTED_QUADRUPLES]]
    if len(quads) > MAX_LISTED_QUADRUPLES:
        out.append(f"  ... {len(quads) - MAX_LISTED_QUADRUPLES} more")
    return out


def _build_header_line(selection: CheckSelection) -> str:
    parts = [f"Points: {len(selection.meta.get('labels') or [])}"]
    for name, key in (("Tolerance", "tol"), ("Equality tolerance", "eq_tol")):
        value = selection.meta.get(key)
        if value is not None:
            parts.append(f"{name}: {value:g}")
    return "  |  ".join(parts)


def format_report(selection: CheckSelection, title: str = "Distance matrix checks") -> str:
    """Plain-text rendering of a check selection for the terminal."""
    lines: List[str] = [SEPARATOR_LINE, title, _build_header_line(selection)]

    if selection.alerts:
        lines += ["", "!!! SYSTEM ALERTS !!!"]
        lines += [f"  [!] {alert}" for alert in selection.alerts]

    lines += ["", "Checks", SEPARATOR_LINE]
    if not selection.findings:
        lines.append("(none)")
    for finding in selection.findings:
        lines.append(f"  • {finding.name} — {_status(finding)}")
        if finding.summary:
            lines.append(f"      ↳ {finding.summary}")
    lines.append("")

    eq_lines = _equality_lines(selection)
    if eq_lines:
        lines += ["Ptolemy Equality Quadruples", SEPARATOR_LINE, *eq_lines, ""]

    lines += [f"Overall: {'PASS' if selection.passed else 'FAIL'}", SEPARATOR_LINE, "End of Report", SEPARATOR_LINE]
    return "\n".join(lines)


def create_pdf_report(selection: CheckSelection, out_path: str, title: str = "Distance matrix checks") -> str:
    """One-page PDF of the check selection: summary table, per-check details and alerts."""
    out_dir = os.path.dirname(out_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    margin = 0.5 * inch
    doc = SimpleDocTemplate(out_path, pagesize=LETTER, leftMargin=margin, rightMargin=margin,
                            topMargin=margin, bottomMargin=margin, title=title, author="ptolab")
    styles = stylesheet()

    story = [
        Paragraph(title, styles["H1"]),
        Paragraph(_build_header_line(selection), styles["Meta"]),
        Paragraph(f"Generated: {datetime.now().strftime('%Y-%m-%d')}", styles["Meta"]),
        rule(),
        Spacer(1, 4),
    ]

    if selection.alerts:
        story.append(Paragraph("System Alerts", styles["AlertHeader"]))
        story += [Paragraph(f"• {alert}", styles["AlertText"]) for alert in selection.alerts]
        story += [Spacer(1, 4), rule(thickness=0.5, color=colors.red)]

    if selection.findings:
        data = [["Check", "Status", "Summary"]] + [
            [f.name, _status(f), Paragraph(f.summary or "", styles["Meta"])] for f in selection.findings
        ]
        status_ink = [("TEXTCOLOR", (1, r), (1, r), PASS_INK if f.passed else colors.red)
                      for r, f in enumerate(selection.findings, start=1)]
        tbl = striped_table(data, [1.2 * inch, 0.7 * inch, 5.6 * inch],
                            extra=[("ALIGN", (1, 1), (1, -1), "CENTER")] + status_ink)
        story.append(tbl)
    else:
        story.append(Paragraph("(no checks run)", styles["Meta"]))

    for finding in selection.findings:
        rows = _detail_rows(finding)
        if not rows:
            continue
        story += [Spacer(1, 4), Paragraph(f"{finding.name} — details", styles["Section"]), rule()]
        story.append(KeepTogether(striped_table([["Field", "Value"]] + rows, [2.0 * inch, 5.5 * inch])))

    eq_lines = _equality_lines(selection)
    if eq_lines:
        story += [Spacer(1, 4), Paragraph("Ptolemy Equality Quadruples", styles["Section"]), rule()]
        story += [Paragraph(line.strip(), styles["Meta"]) for line in eq_lines]

    doc.build(story)
    return out_path
