"""OPENQASM 2.0 emission and parsing for the circuit IR.

Only the dialect produced by :func:`emit_qasm` is accepted back: the
``qelib1.inc`` gates ``h x z cx ccx cz``, ``measure``, ``barrier``, and
``qreg``/``creg`` declarations.  Multi-controlled gates are lowered to
Toffoli V-chains before emission.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence

from .circuit import Circuit, Gate, GateKind, Role, x_gate
from .errors import QasmError, ResourceError

HEADER = "OPENQASM 2.0;"
INCLUDE = 'include "qelib1.inc";'

_NATIVE = {
    "h": GateKind.H,
    "x": GateKind.X,
    "z": GateKind.Z,
    "cx": GateKind.CX,
    "ccx": GateKind.CCX,
    "cz": GateKind.CZ,
}
_ARITY = {"h": 1, "x": 1, "z": 1, "cx": 2, "ccx": 3, "cz": 2}


# --------------------------------------------------------------------------
# decomposition


def idle_ancillas(circuit: Circuit) -> list[int]:
    """Ancilla-role qubits that no gate touches; they stay in |0> throughout."""
    touched = {q for g in circuit.gates for q in g.qubits}
    return [q for r in circuit.registers if r.role is Role.ANCILLA
            for q in r.qubits if q not in touched]


def v_chain(controls: Sequence[int], target: int, ancillas: Sequence[int]) -> list[Gate]:
    """Toffoli ladder for an MCX with ``k >= 3`` controls and ``k - 2`` clean ancillas."""
    k = len(controls)
    anc = list(ancillas[: k - 2])
    if len(anc) < k - 2:
        raise ResourceError(f"{k}-control gate needs {k - 2} clean ancillas, {len(anc)} available")
    compute = [x_gate([controls[0], controls[1]], anc[0])]
    for i in range(1, k - 2):
        compute.append(x_gate([controls[i + 1], anc[i - 1]], anc[i]))
    core = x_gate([controls[-1], anc[-1]], target)
    return compute + [core] + compute[::-1]


def decompose_multicontrols(circuit: Circuit, ancillas: Sequence[int] | None = None) -> Circuit:
    """Rewrite MCX and NCZ gates into ``{h, x, z, cx, ccx, cz}``.

    ``ancillas`` must be qubits that are |0> whenever a multi-controlled
    gate runs; by default the circuit's idle ancilla qubits are used.
    """
    pool = list(idle_ancillas(circuit) if ancillas is None else ancillas)
    out = Circuit(list(circuit.registers), [], circuit.qubit_count)
    for g in circuit.gates:
        if g.kind is GateKind.MCX:
            out.extend(v_chain(g.controls, g.target, [q for q in pool if q not in g.qubits]))
        elif g.kind is GateKind.NCZ:
            h = Gate(GateKind.H, (), (g.target,))
            out.append(h)
            if len(g.controls) == 2:
                out.append(x_gate(g.controls, g.target))
            else:
                out.extend(v_chain(g.controls, g.target, [q for q in pool if q not in g.qubits]))
            out.append(h)
        else:
            out.append(g)
    return out


# --------------------------------------------------------------------------
# emission


def emit_qasm(circuit: Circuit, ancillas: Sequence[int] | None = None) -> str:
    """Render ``circuit`` as OPENQASM 2.0 text (multi-controls decomposed)."""
    flat = decompose_multicontrols(circuit, ancillas)
    names = flat.qubit_names()
    measured = {q for g in flat.gates if g.kind is GateKind.MEASURE for q in g.targets}
    lines = [HEADER, INCLUDE]
    for r in flat.registers:
        lines.append(f"qreg {r.name}[{r.width}]; // {r.role.value}")
    for r in flat.registers:
        if measured & set(r.qubits):
            lines.append(f"creg c_{r.name}[{r.width}];")
    for g in flat.gates:
        if g.kind is GateKind.MEASURE:
            q = names[g.target]
            lines.append(f"measure {q} -> c_{q};")
        else:
            lines.append(f"{g.kind.value} {','.join(names[q] for q in g.qubits)};")
    return "\n".join(lines) + "\n"


def write_qasm(circuit: Circuit, path, ancillas: Sequence[int] | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_qasm(circuit, ancillas))


# --------------------------------------------------------------------------
# parsing


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<comment>//[^\n]*)
  | (?P<newline>\n)
  | (?P<ws>[ \t\r]+)
  | (?P<real>\d+\.\d*)
  | (?P<int>\d+)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[;\[\],])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> Iterator[_Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise QasmError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            yield _Token(kind, m.group(), line, col)
        pos = m.end()
    yield _Token("eof", "", line, pos - line_start + 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.i = 0
        self.circuit = Circuit()
        self.cregs: dict[str, int] = {}

    # token helpers; comments are skipped except where a qreg role is read
    def _skip_comments(self):
        while self.tokens[self.i].kind == "comment":
            self.i += 1

    def peek(self) -> _Token:
        self._skip_comments()
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.text else "end of input"
            raise QasmError(f"expected {want}, got {got}", tok.line, tok.col)
        return tok

    def parse(self) -> Circuit:
        first = self.peek()
        if first.kind != "id" or first.text != "OPENQASM":
            raise QasmError("missing 'OPENQASM 2.0;' header", first.line, first.col)
        self.next()
        ver = self.next()
        if ver.kind != "real" or ver.text not in ("2.0", "2."):
            raise QasmError(f"unsupported version {ver.text!r}", ver.line, ver.col)
        self.expect("sym", ";")
        while self.peek().kind != "eof":
            self.statement()
        return self.circuit

    def statement(self):
        tok = self.next()
        if tok.kind != "id":
            raise QasmError(f"unexpected {tok.text!r}", tok.line, tok.col)
        word = tok.text
        if word == "include":
            s = self.expect("string")
            if s.text != '"qelib1.inc"':
                raise QasmError(f"only qelib1.inc may be included, got {s.text}", s.line, s.col)
            self.expect("sym", ";")
        elif word in ("qreg", "creg"):
            name = self.expect("id")
            self.expect("sym", "[")
            size = self.expect("int")
            self.expect("sym", "]")
            semi = self.expect("sym", ";")
            width = int(size.text)
            if width == 0:
                raise QasmError("register size must be positive", size.line, size.col)
            if word == "creg":
                if name.text in self.cregs:
                    raise QasmError(f"duplicate creg {name.text!r}", name.line, name.col)
                self.cregs[name.text] = width
            else:
                role = self._trailing_role(semi.line)
                if self.circuit.gates:
                    raise QasmError("qreg declared after gates", tok.line, tok.col)
                try:
                    self.circuit.allocate_register(name.text, width, role)
                except ValueError as exc:
                    raise QasmError(str(exc), name.line, name.col) from None
        elif word == "measure":
            q = self.operand()
            arrow = self.next()
            if arrow.kind != "arrow":
                raise QasmError("expected '->'", arrow.line, arrow.col)
            self.classical_operand(len(q))
            self.expect("sym", ";")
            self.circuit.extend(Gate(GateKind.MEASURE, (), (x,)) for x in q)
        elif word == "barrier":
            qubits = [x for group in self.operand_list() for x in group]
            self.expect("sym", ";")
            self.circuit.append(Gate(GateKind.BARRIER, (), tuple(qubits)))
        elif word in _NATIVE:
            groups = self.operand_list()
            semi = self.expect("sym", ";")
            if len(groups) != _ARITY[word]:
                raise QasmError(f"{word} takes {_ARITY[word]} operands, got {len(groups)}", tok.line, tok.col)
            for ops in self._broadcast(groups, tok):
                try:
                    self.circuit.append(Gate(_NATIVE[word], tuple(ops[:-1]), (ops[-1],)))
                except ValueError as exc:
                    raise QasmError(str(exc), tok.line, tok.col) from None
        else:
            raise QasmError(f"unknown gate or keyword {word!r}", tok.line, tok.col)

    def _trailing_role(self, line: int) -> Role:
        tok = self.tokens[self.i]
        if tok.kind == "comment" and tok.line == line:
            text = tok.text[2:].strip()
            if text in {r.value for r in Role}:
                return Role(text)
        return Role.ANCILLA

    def _broadcast(self, groups: list[list[int]], tok: _Token):
        sizes = {len(g) for g in groups if len(g) > 1}
        if len(sizes) > 1:
            raise QasmError("register size mismatch in broadcast", tok.line, tok.col)
        n = sizes.pop() if sizes else 1
        for i in range(n):
            yield [g[i] if len(g) > 1 else g[0] for g in groups]

    def operand_list(self) -> list[list[int]]:
        groups = [self.operand()]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.next()
            groups.append(self.operand())
        return groups

    def _indexed(self):
        name = self.expect("id")
        index = None
        if self.peek().kind == "sym" and self.peek().text == "[":
            self.next()
            index = self.expect("int")
            self.expect("sym", "]")
        return name, index

    def operand(self) -> list[int]:
        name, index = self._indexed()
        try:
            reg = self.circuit.register(name.text)
        except KeyError:
            raise QasmError(f"undeclared qreg {name.text!r}", name.line, name.col) from None
        if index is None:
            return reg.qubits
        i = int(index.text)
        if i >= reg.width:
            raise QasmError(f"index {i} out of range for {name.text}[{reg.width}]", index.line, index.col)
        return [reg.offset + i]

    def classical_operand(self, count: int) -> None:
        name, index = self._indexed()
        if name.text not in self.cregs:
            raise QasmError(f"undeclared creg {name.text!r}", name.line, name.col)
        width = self.cregs[name.text]
        if index is not None and int(index.text) >= width:
            raise QasmError(f"index {index.text} out of range for {name.text}[{width}]", index.line, index.col)
        if index is None and width != count:
            raise QasmError("measure size mismatch", name.line, name.col)


def parse_qasm(text: str) -> Circuit:
    """Parse the emitted OPENQASM 2.0 subset back into a :class:`Circuit`."""
    return _Parser(text).parse()
