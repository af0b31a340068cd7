"""Shared look of ptolab PDFs: palette, paragraph styles and striped tables."""
from __future__ import annotations

from typing import Iterable, Optional

from reportlab.lib import colors
from reportlab.lib.styles import ParagraphStyle, StyleSheet1, getSampleStyleSheet
from reportlab.platypus import Table, TableStyle
from reportlab.platypus.flowables import HRFlowable

INK = colors.HexColor("#111827")
META_INK = colors.HexColor("#374151")
MUTED_INK = colors.HexColor("#6B7280")
HEADER_FILL = colors.HexColor("#3B82F6")
STRIPE_FILL = colors.HexColor("#F8FAFC")
GRID = colors.HexColor("#E5E7EB")
FRAME = colors.HexColor("#CBD5E1")
RULE = colors.HexColor("#DDDDDD")
PASS_INK = colors.HexColor("#15803D")


def rule(thickness: float = 1, color=RULE, before: float = 2, after: float = 2) -> HRFlowable:
    return HRFlowable(width="100%", thickness=thickness, color=color, spaceBefore=before, spaceAfter=after)


def stylesheet(title_size: int = 12) -> StyleSheet1:
    """Sample sheet plus H1/Meta/Muted/Section and the red alert styles."""
    sheet = getSampleStyleSheet()
    extra = [
        ParagraphStyle(name="H1", fontName="Helvetica-Bold", fontSize=title_size, leading=title_size + 4,
                       textColor=INK, spaceAfter=2 if title_size < 14 else 8),
        ParagraphStyle(name="Meta", fontName="Helvetica", fontSize=9, leading=10, textColor=META_INK, spaceAfter=2),
        ParagraphStyle(name="Muted", fontName="Helvetica-Oblique", fontSize=9, leading=11, textColor=MUTED_INK,
                       spaceAfter=6),
        ParagraphStyle(name="Section", fontName="Helvetica-Bold", fontSize=11, leading=12, textColor=INK,
                       spaceBefore=4, spaceAfter=2),
        ParagraphStyle(name="AlertHeader", parent=sheet["Heading4"], textColor=colors.red,
                       spaceBefore=6, spaceAfter=2),
        ParagraphStyle(name="AlertText", parent=sheet["BodyText"], textColor=colors.red, fontSize=9),
    ]
    for style in extra:
        sheet.add(style)
    return sheet


def table_style(body_size: int = 9, padding: Optional[float] = 2) -> TableStyle:
    header, body = ((0, 0), (-1, 0)), ((0, 1), (-1, -1))
    whole = ((0, 0), (-1, -1))
    cmds = [
        ("FONT", *header, "Helvetica-Bold"),
        ("FONTSIZE", *header, 9),
        ("TEXTCOLOR", *header, colors.whitesmoke),
        ("BACKGROUND", *header, HEADER_FILL),
        ("FONT", *body, "Helvetica"),
        ("FONTSIZE", *body, body_size),
        ("VALIGN", *whole, "MIDDLE"),
        ("INNERGRID", *whole, 0.25, GRID),
        ("BOX", *whole, 0.5, FRAME),
    ]
    if padding is not None:
        cmds += [(side, *whole, padding) for side in ("LEFTPADDING", "RIGHTPADDING", "TOPPADDING", "BOTTOMPADDING")]
    return TableStyle(cmds)


def striped_table(data, col_widths, extra: Iterable[tuple] = (), body_size: int = 9,
                  padding: Optional[float] = 2, **kwargs) -> Table:
    """Header row in the accent color, every other body row shaded, header repeated on page breaks."""
    tbl = Table(data, colWidths=col_widths, **kwargs)
    tbl.setStyle(table_style(body_size, padding))
    stripes = [("BACKGROUND", (0, r), (-1, r), STRIPE_FILL) for r in range(2, len(data), 2)]
    tbl.setStyle(TableStyle(list(extra) + stripes))
    tbl.splitByRow = 1
    tbl.repeatRows = 1
    return tbl
