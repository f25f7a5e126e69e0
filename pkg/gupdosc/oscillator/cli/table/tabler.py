import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from typing import NamedTuple

import numpy as np
from openpyxl import Workbook
from openpyxl.styles import Font

from ...exceptions import UsageError


TEXT_DIGITS = 12
JSON_DIGITS = 17
MISSING = '-'


class Table(NamedTuple):
    title: str
    columns: tuple
    rows: list  # one tuple per row, len(columns) cells


def to_jsonable(value):
    """Plain JSON values for report content (complex numbers become {'re', 'im'})"""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(value.real) + 0.0, 'im': float(value.imag) + 0.0}
    if isinstance(value, (float, np.floating)):
        return float(value) + 0.0
    return value


class ReportEncoder(json.JSONEncoder):
    """JSON encoder that writes every float with JSON_DIGITS significant digits"""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        string = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        return json.encoder._make_iterencode(
            markers, self.default, string, self.indent, format_json_float,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def format_json_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f'out of range float values are not JSON compliant: {value!r}')
    text = format(value + 0.0, f'.{JSON_DIGITS}g')
    # keep floats floats after a reload
    return text if any(char in text for char in '.e') else text + '.0'


def format_cell(value) -> str:
    if value is None:
        return MISSING
    if isinstance(value, (bool, np.bool_)):
        return 'yes' if value else 'no'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return format_cell(float(value.real))
        return f'{value.real + 0.0:.{TEXT_DIGITS}g}{value.imag + 0.0:+.{TEXT_DIGITS}g}j'
    if isinstance(value, (float, np.floating)):
        return f'{float(value) + 0.0:.{TEXT_DIGITS}g}'
    if isinstance(value, (list, tuple)):
        return ' '.join(format_cell(item) for item in value)
    return str(value)


def get_text_table(table: Table) -> str:
    """Aligned table: text columns flush left, everything else flush right"""
    cells = [[format_cell(value) for value in row] for row in table.rows]
    widths = [len(column) for column in table.columns]
    for row in cells:
        widths = [max(width, len(cell)) for width, cell in zip(widths, row)]
    numeric = [
        all(isinstance(row[k], (int, float, complex, np.number)) or row[k] is None for row in table.rows)
        for k in range(len(table.columns))
    ]

    def line(values):
        return '  '.join(value.rjust(width) if right else value.ljust(width)
                         for value, width, right in zip(values, widths, numeric)).rstrip()

    lines = [table.title, line(table.columns), line(['-' * width for width in widths])]
    lines.extend(line(row) for row in cells)
    return '\n'.join(lines)


def get_text_report(title: str, tables, notes=()) -> str:
    parts = [title, '=' * len(title)]
    parts.extend(f'{note}' for note in notes)
    body = '\n\n'.join(get_text_table(table) for table in tables)
    return '\n'.join(parts) + ('\n\n' + body if body else '') + '\n'


def get_json_report(report: dict) -> str:
    """Indented JSON with JSON_DIGITS significant digits per float and a trailing newline"""
    try:
        return json.dumps(to_jsonable(report), cls=ReportEncoder, indent=2, ensure_ascii=False) + '\n'
    except ValueError as error:
        raise UsageError(f'report holds a non-finite number: {error}')


def get_csv_report(tables) -> str:
    """RFC 4180 CSV: each table is a header row then its rows; tables are separated by an empty line"""
    buffer = io.StringIO(newline='')
    writer = csv.writer(buffer)
    for number, table in enumerate(tables):
        if number:
            buffer.write('\r\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(['' if value is None else _csv_value(value) for value in row])
    return buffer.getvalue()


def _csv_value(value):
    if isinstance(value, (complex, np.complexfloating)):
        return format_cell(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value) + 0.0)
    if isinstance(value, (list, tuple)):
        return ' '.join(str(_csv_value(item)) for item in value)
    return value


def get_created_xlsx_path(title: str, tables, path: str, notes=()) -> str:
    """Write one sheet per table and return the file path"""
    workbook = Workbook()
    summary = workbook.active
    summary.title = 'report'
    summary.append([title])
    summary['A1'].font = Font(bold=True)
    for note in notes:
        summary.append([note])
    for number, table in enumerate(tables, start=1):
        sheet = workbook.create_sheet(_sheet_title(table.title, number))
        sheet.append([table.title])
        sheet['A1'].font = Font(bold=True)
        sheet.append(list(table.columns))
        for cell in sheet[2]:
            cell.font = Font(bold=True)
        for row in table.rows:
            sheet.append([_xlsx_value(value) for value in row])
    try:
        workbook.save(path)
    except OSError as error:
        raise UsageError(f'cannot write {path}: {error}')
    return path


def _sheet_title(title: str, number: int) -> str:
    # Excel: at most 31 characters, none of []:*?/\
    cleaned = ''.join(' ' if char in '[]:*?/\\' else char for char in title)
    return f'{number} {cleaned}'[:31]


def _xlsx_value(value):
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return format_cell(value)
