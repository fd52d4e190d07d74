"""
Code-spec files.
A code-spec file is a JSON document describing a code completely: kernel
matrix, depth, steps, block length, the frozen positions and the channel
parameter they were selected for.
"""
import json
from fractions import Fraction
from pathlib import Path

from .circuit import build_circuit
from .decoder import Code
from .errors import CodeSpecError, PolarError
from .kernel import make_kernel

SPEC_VERSION = 1


def code_spec_document(code, p=None, rate=None):
    document = {'spec_version': SPEC_VERSION, **code.to_dict()}
    document['p'] = p
    document['rate'] = str(Fraction(rate)) if rate is not None else None
    return document


def save_code_spec(code, path, p=None, rate=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(code_spec_document(code, p, rate), indent=2) + '\n', encoding='utf-8')
    return path


def code_from_document(document):
    """Rebuild (Code, metadata) from a parsed code-spec document"""
    if not isinstance(document, dict):
        raise CodeSpecError('Code-spec document must be an object')
    if document.get('spec_version') != SPEC_VERSION:
        raise CodeSpecError(f"Unsupported spec_version {document.get('spec_version')!r}")

    try:
        kernel = make_kernel(document['kernel']['matrix'], document['kernel'].get('name', 'kernel'))
        circuit = build_circuit(kernel, document['depth'], document['steps'])
        code = Code(circuit, frozenset(document.get('frozen', [])))
    except KeyError as exc:
        raise CodeSpecError(f'Code-spec document is missing {exc}') from None
    except (PolarError, TypeError, AttributeError) as exc:
        raise CodeSpecError(f'Invalid code-spec document: {exc}') from exc

    if document.get('N', code.block_length) != code.block_length:
        raise CodeSpecError(f"N={document['N']} does not match b^l={code.block_length}")
    if document.get('K', code.info_count) != code.info_count:
        raise CodeSpecError(f"K={document['K']} does not match the frozen list")

    return code, {'p': document.get('p'), 'rate': document.get('rate')}


def load_code_spec(path):
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as exc:
        raise CodeSpecError(f'Cannot read code-spec file {path}: {exc}') from exc
    return code_from_document(document)


def load_kernel_file(path):
    """Kernel from a JSON file holding 'matrix' rows and an optional 'name'"""
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
        return make_kernel(document['matrix'], document.get('name', Path(path).stem))
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CodeSpecError(f'Cannot read kernel file {path}: {exc}') from exc
