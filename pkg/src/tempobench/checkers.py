"""Mini-grammar checkers for the three solver input syntaxes.

These recursive-descent parsers accept the documented grammar of each
target (a practical subset of TPTP FOF, LADR and the modal begin/end
format) and reject structurally broken files with a positioned message.
They guard every emitted file when the real solvers are not installed.
"""

from __future__ import annotations

import re


class GrammarError(ValueError):
    pass


class _Tokens:
    def __init__(self, tokens: list[tuple[str, str, int]], label: str):
        self.tokens = tokens
        self.pos = 0
        self.label = label

    def peek(self) -> tuple[str, str] | None:
        if self.pos < len(self.tokens):
            kind, text, _ = self.tokens[self.pos]
            return kind, text
        return None

    def next(self) -> tuple[str, str]:
        if self.pos >= len(self.tokens):
            raise GrammarError(f"{self.label}: unexpected end of input")
        kind, text, line = self.tokens[self.pos]
        self.pos += 1
        return kind, text

    def expect(self, kind: str, text: str | None = None) -> str:
        if self.pos >= len(self.tokens):
            raise GrammarError(f"{self.label}: unexpected end of input, wanted {text or kind}")
        got_kind, got_text, line = self.tokens[self.pos]
        if got_kind != kind or (text is not None and got_text != text):
            raise GrammarError(
                f"{self.label}: line {line}: expected {text or kind}, got {got_text!r}"
            )
        self.pos += 1
        return got_text

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def _tokenize(text: str, spec: list[tuple[str, str]], label: str, comment: str | None) -> _Tokens:
    master = re.compile("|".join(f"(?P<{k}>{p})" for k, p in spec))
    tokens: list[tuple[str, str, int]] = []
    line = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            continue
        if comment and text.startswith(comment, i):
            end = text.find("\n", i)
            i = len(text) if end == -1 else end
            continue
        m = master.match(text, i)
        if not m:
            raise GrammarError(f"{label}: line {line}: stray character {ch!r}")
        tokens.append((m.lastgroup, m.group(), line))
        i = m.end()
    return _Tokens(tokens, label)


# --- TPTP (FOF) -------------------------------------------------------------

_TPTP_SPEC = [
    ("LOWER", r"[a-z][A-Za-z0-9_]*"),
    ("UPPER", r"[A-Z_][A-Za-z0-9_]*"),
    ("DEFINED", r"\$[a-z]+"),
    ("PUNCT", r"<=>|=>|[()\[\],.:&|~!?]"),
]


def _tptp_unitary(toks: _Tokens) -> None:
    kind, text = toks.next()
    if kind == "PUNCT" and text in ("!", "?"):
        toks.expect("PUNCT", "[")
        toks.expect("UPPER")
        while toks.peek() == ("PUNCT", ","):
            toks.next()
            toks.expect("UPPER")
        toks.expect("PUNCT", "]")
        toks.expect("PUNCT", ":")
        _tptp_unitary(toks)
        return
    if kind == "PUNCT" and text == "~":
        _tptp_unitary(toks)
        return
    if kind == "PUNCT" and text == "(":
        _tptp_formula(toks)
        toks.expect("PUNCT", ")")
        return
    if kind == "DEFINED":
        return
    if kind == "LOWER":
        if toks.peek() == ("PUNCT", "("):
            toks.next()
            _tptp_term(toks)
            while toks.peek() == ("PUNCT", ","):
                toks.next()
                _tptp_term(toks)
            toks.expect("PUNCT", ")")
        return
    raise GrammarError(f"{toks.label}: unexpected token {text!r} in formula")


def _tptp_term(toks: _Tokens) -> None:
    kind, text = toks.next()
    if kind in ("UPPER", "LOWER"):
        return
    raise GrammarError(f"{toks.label}: bad term {text!r}")


def _tptp_formula(toks: _Tokens) -> None:
    _tptp_unitary(toks)
    nxt = toks.peek()
    if nxt is None or nxt[0] != "PUNCT" or nxt[1] not in ("&", "|", "=>", "<=>"):
        return
    op = nxt[1]
    if op in ("=>", "<=>"):
        toks.next()
        _tptp_unitary(toks)
        return
    # associative chains must not mix & and | at one level
    while toks.peek() == ("PUNCT", op):
        toks.next()
        _tptp_unitary(toks)
    nxt = toks.peek()
    if nxt is not None and nxt[0] == "PUNCT" and nxt[1] in ("&", "|"):
        raise GrammarError(f"{toks.label}: mixed {op} and {nxt[1]} without parentheses")


def check_tptp(text: str) -> None:
    toks = _tokenize(text, _TPTP_SPEC, "tptp", "%")
    saw_formula = False
    while not toks.at_end():
        toks.expect("LOWER", "fof")
        toks.expect("PUNCT", "(")
        toks.expect("LOWER")  # formula name
        toks.expect("PUNCT", ",")
        role = toks.expect("LOWER")
        if role not in ("axiom", "conjecture", "hypothesis", "lemma"):
            raise GrammarError(f"tptp: unknown formula role {role!r}")
        toks.expect("PUNCT", ",")
        _tptp_formula(toks)
        toks.expect("PUNCT", ")")
        toks.expect("PUNCT", ".")
        saw_formula = True
    if not saw_formula:
        raise GrammarError("tptp: no fof formulas found")


# --- LADR -------------------------------------------------------------------

_LADR_SPEC = [
    ("WORD", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"->|[()&|.,-]"),
]


def _ladr_unary(toks: _Tokens) -> None:
    kind, text = toks.next()
    if kind == "PUNCT" and text == "-":
        _ladr_unary(toks)
        return
    if kind == "PUNCT" and text == "(":
        _ladr_formula(toks)
        toks.expect("PUNCT", ")")
        return
    if kind == "WORD" and text in ("all", "exists"):
        toks.expect("WORD")  # the bound variable
        _ladr_unary(toks)
        return
    if kind == "WORD":
        if toks.peek() == ("PUNCT", "("):
            toks.next()
            toks.expect("WORD")
            while toks.peek() == ("PUNCT", ","):
                toks.next()
                toks.expect("WORD")
            toks.expect("PUNCT", ")")
        return
    raise GrammarError(f"ladr: unexpected token {text!r} in formula")


def _ladr_formula(toks: _Tokens) -> None:
    _ladr_unary(toks)
    while True:
        nxt = toks.peek()
        if nxt is None or nxt[0] != "PUNCT" or nxt[1] not in ("&", "|", "->"):
            return
        toks.next()
        _ladr_unary(toks)


def check_ladr(text: str) -> None:
    toks = _tokenize(text, _LADR_SPEC, "ladr", "%")
    saw_block = False
    while not toks.at_end():
        toks.expect("WORD", "formulas")
        toks.expect("PUNCT", "(")
        name = toks.expect("WORD")
        if name not in ("sos", "goals", "assumptions", "usable"):
            raise GrammarError(f"ladr: unknown formula list {name!r}")
        toks.expect("PUNCT", ")")
        toks.expect("PUNCT", ".")
        while toks.peek() != ("WORD", "end_of_list"):
            if toks.at_end():
                raise GrammarError("ladr: unterminated formulas block")
            _ladr_formula(toks)
            toks.expect("PUNCT", ".")
        toks.expect("WORD", "end_of_list")
        toks.expect("PUNCT", ".")
        saw_block = True
    if not saw_block:
        raise GrammarError("ladr: no formulas blocks found")


# --- InToHyLo ----------------------------------------------------------------

_IHL_SPEC = [
    ("DIA", r"<r[0-9]+>"),
    ("BOX", r"\[r[0-9]+\]"),
    ("PROP", r"p[0-9]+"),
    ("WORD", r"[a-z]+"),
    ("PUNCT", r"->|[()&|~-]"),
]


def _ihl_unary(toks: _Tokens) -> None:
    kind, text = toks.next()
    if kind == "PUNCT" and text in ("-", "~"):
        _ihl_unary(toks)
        return
    if kind in ("DIA", "BOX"):
        _ihl_unary(toks)
        return
    if kind == "PUNCT" and text == "(":
        _ihl_formula(toks)
        toks.expect("PUNCT", ")")
        return
    if kind == "PROP":
        return
    if kind == "WORD" and text in ("true", "false"):
        return
    raise GrammarError(f"intohylo: unexpected token {text!r} in formula")


def _ihl_formula(toks: _Tokens) -> None:
    _ihl_unary(toks)
    while True:
        nxt = toks.peek()
        if nxt is None or nxt[0] != "PUNCT" or nxt[1] not in ("&", "|", "->"):
            return
        toks.next()
        _ihl_unary(toks)


def check_intohylo(text: str) -> None:
    toks = _tokenize(text, _IHL_SPEC, "intohylo", None)
    toks.expect("WORD", "begin")
    _ihl_formula(toks)
    toks.expect("WORD", "end")
    if not toks.at_end():
        raise GrammarError("intohylo: trailing input after end")


CHECKERS = {"tptp": check_tptp, "ladr": check_ladr, "intohylo": check_intohylo}


def check_target(target: str, text: str) -> None:
    """Validate emitted text against the target's mini-grammar."""
    if target == "canonical":
        from .emit import parse_canonical

        parse_canonical(text)
        return
    CHECKERS[target](text)
