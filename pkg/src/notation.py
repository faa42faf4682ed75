"""
Formula Notation Module
Fully parenthesized infix and Polish notation, printers and parsers.
Parsers accept '*' for × and '^' for ∧; infix also accepts juxtaposition
as multiplication, e.g. "((1+1)+1)(1+1)".
"""

from errors import ParseError, ValueConstraintViolation
from formula import EXPONENTIAL, Formula, FormulaKindSet, Kind, validate

SYMBOL_ALIASES = {
    '*': '×',
    '^': '∧',
}

_KIND_BY_SYMBOL = {kind.value: kind for kind in Kind}


def _normalize(symbol):
    return SYMBOL_ALIASES.get(symbol, symbol)


def to_polish(formula: Formula) -> str:
    """One symbol per node, pre-order"""
    return formula.key


def canonical_key(formula: Formula) -> str:
    """Injective text key for a formula tree (its Polish notation)"""
    return formula.key


def to_infix(formula: Formula) -> str:
    """Infix with parentheses around every binary node"""
    out = []
    stack = [formula]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.kind is Kind.LEAF:
            out.append('1')
        else:
            stack.extend((')', item.right, item.kind.value, item.left, '('))
    return ''.join(out)


def _checked(formula, kinds):
    result = validate(formula, kinds)
    if not result.valid:
        raise ValueConstraintViolation(result.error)
    return formula


def parse_polish(text: str, kinds: FormulaKindSet = EXPONENTIAL) -> Formula:
    """
    Parse Polish notation over {1, +, ×, ∧}

    Args:
        text: Formula text; whitespace is ignored
        kinds: Validation kinds applied to the parsed tree

    Returns:
        Formula

    Raises:
        ParseError: unknown symbol, missing operand, or trailing symbols
        ValueConstraintViolation: the tree parses but fails validation
    """
    # Each entry: [kind, children collected so far]
    pending = []
    root = None
    for position, char in enumerate(text):
        if char.isspace():
            continue
        if root is not None:
            raise ParseError("trailing symbol", position)
        kind = _KIND_BY_SYMBOL.get(_normalize(char))
        if kind is None:
            raise ParseError(f"unexpected symbol {char!r}", position)
        if kind is not Kind.LEAF:
            pending.append([kind, []])
            continue
        node = Formula.leaf()
        while True:
            if not pending:
                root = node
                break
            pending[-1][1].append(node)
            if len(pending[-1][1]) < 2:
                break
            kind, (left, right) = pending.pop()
            node = Formula(kind, left, right)
    if root is None:
        raise ParseError("unexpected end of input", len(text))
    return _checked(root, kinds)


class _InfixParser:
    """
    Precedence climbing over the grammar

        sum     := product ('+' product)*           left-associative
        product := power (('×' | juxtaposition) power)*   left-associative
        power   := atom ('∧' power)?                right-associative
        atom    := '1' | '(' sum ')'
    """

    def __init__(self, text):
        self.tokens = [(i, _normalize(c)) for i, c in enumerate(text) if not c.isspace()]
        self.end = len(text)
        self.index = 0

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return None

    def position(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return self.end

    def expect(self, symbol):
        if self.peek() != symbol:
            found = self.peek()
            raise ParseError(f"expected {symbol!r}, found {found!r}" if found else
                             f"expected {symbol!r}, found end of input", self.position())
        self.index += 1

    def parse(self):
        node = self.parse_sum()
        if self.peek() is not None:
            raise ParseError(f"unexpected symbol {self.peek()!r}", self.position())
        return node

    def parse_sum(self):
        node = self.parse_product()
        while self.peek() == '+':
            self.index += 1
            node = Formula.add(node, self.parse_product())
        return node

    def parse_product(self):
        node = self.parse_power()
        while True:
            if self.peek() == '×':
                self.index += 1
            elif self.peek() != '(':
                return node
            node = Formula.mul(node, self.parse_power())

    def parse_power(self):
        base = self.parse_atom()
        if self.peek() == '∧':
            self.index += 1
            return Formula.pow(base, self.parse_power())
        return base

    def parse_atom(self):
        symbol = self.peek()
        if symbol == '1':
            self.index += 1
            return Formula.leaf()
        if symbol == '(':
            self.index += 1
            node = self.parse_sum()
            self.expect(')')
            return node
        if symbol is None:
            raise ParseError("unexpected end of input", self.position())
        raise ParseError(f"unexpected symbol {symbol!r}", self.position())


def parse_infix(text: str, kinds: FormulaKindSet = EXPONENTIAL) -> Formula:
    """
    Parse infix text over {1, +, ×, ∧, (, )}

    Raises:
        ParseError: with the character offset of the offending symbol
        ValueConstraintViolation: the tree parses but fails validation
    """
    return _checked(_InfixParser(text).parse(), kinds)
