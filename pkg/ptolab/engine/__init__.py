from .single_report import create_pdf_report, format_report
from .final_report import write_table_pdf
