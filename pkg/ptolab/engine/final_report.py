from __future__ import annotations
import math
import os
from datetime import datetime
from typing import Any, Optional, Sequence

from reportlab.lib.pagesizes import LETTER, landscape
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer

import ptolab
from ptolab.engine.pdf_style import rule, striped_table, stylesheet

# columns past this count switch the page to landscape
_WIDE_TABLE = 7


def _cell(v: Any) -> str:
    if v is None:
        return "—"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "∞" if v > 0 else "-∞"
        return f"{v:.6g}"
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    return str(v)


def write_table_pdf(
    title: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    out_path: str,
    notes: Optional[Sequence[str]] = None,
) -> str:
    """
    Summary PDF for an experiment table (cube experiment rows, distortion
    curves, parameter scans). `notes` are printed under the title.
    """
    out_dir = os.path.dirname(out_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)

    pagesize = landscape(LETTER) if len(columns) > _WIDE_TABLE else LETTER
    margin = 0.75 * inch
    doc = SimpleDocTemplate(out_path, pagesize=pagesize, leftMargin=margin, rightMargin=margin,
                            topMargin=margin, bottomMargin=margin, title=title, author="ptolab")
    styles = stylesheet(title_size=16)

    story = [
        Paragraph(title, styles["H1"]),
        rule(before=4, after=6),
        Paragraph(f"ptolab {ptolab.__version__} • Generated: {datetime.now().strftime('%Y-%m-%d')}", styles["Meta"]),
    ]
    story += [Paragraph(note, styles["Meta"]) for note in notes or ()]
    story.append(Spacer(1, 0.15 * inch))

    if rows:
        col_w = (pagesize[0] - 2 * margin) / max(1, len(columns))
        data = [list(columns)] + [[_cell(v) for v in r] for r in rows]
        story.append(striped_table(data, [col_w] * len(columns), extra=[("ALIGN", (0, 1), (-1, -1), "RIGHT")],
                                   body_size=8, padding=None, hAlign="LEFT"))
    else:
        story.append(Paragraph("(no rows)", styles["Muted"]))

    doc.build(story)
    return out_path
