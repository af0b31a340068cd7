from .report_io import dumps_report, matrix_to_json, write_matrix_csv, write_table_csv
