"""
Text encoding of record fields and decoding of CSV columns.

Floats are written with ``repr`` so that every IEEE-754 double survives a
write/read cycle exactly and identical runs produce identical bytes.
"""
import numpy as np

from .err import DataError


def escape_item(val, mapping=None):
    if mapping is None:
        mapping = encoders
    encoder = mapping.get(type(val))

    # Fallback to default when no encoder found
    if not encoder:
        try:
            encoder = mapping[str]
        except KeyError:
            raise TypeError("no default type converter defined")

    return encoder(val, mapping)


def escape_row(row, mapping=None):
    return [escape_item(v, mapping) for v in row]


def escape_bool(value, mapping=None):
    return str(int(value))


def escape_int(value, mapping=None):
    return str(int(value))


def escape_float(value, mapping=None):
    return repr(float(value))


def escape_str(value, mapping=None):
    return str(value)


def escape_None(value, mapping=None):
    return ''


def convert_int(obj):
    try:
        return int(obj)
    except ValueError as e:
        raise DataError("Not a valid integer: %s" % e)


def convert_float(obj):
    try:
        return float(obj)
    except ValueError as e:
        raise DataError("Not a valid float: %s" % e)


def through(x):
    return x


decoders = {
    'int': convert_int,
    'float': convert_float,
    'str': through,
}


def convert_column_data(column_type, column_data):
    """Decode one CSV cell; an empty cell is None."""
    if column_data is None or column_data == '':
        return None
    try:
        decoder = decoders[column_type.lower().strip()]
    except KeyError:
        raise DataError("Unknown column type %r" % (column_type,))
    return decoder(column_data)


encoders = {
    bool: escape_bool,
    np.bool_: escape_bool,
    int: escape_int,
    np.int32: escape_int,
    np.int64: escape_int,
    float: escape_float,
    np.float64: escape_float,
    str: escape_str,
    type(None): escape_None,
}
