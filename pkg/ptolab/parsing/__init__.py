from .parse_matrix import load_matrix, parse_matrix
