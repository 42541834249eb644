"""Declarative spec files for systems, observables, and experiment runs.

Grammar (comments run from '#' to end of line; strings are double-quoted
with no escapes; letters and block symbols are single characters, group
element symbols are base-36 digits of the element index):

    document     = { declaration }
    declaration  = substitution | morse | rs | veech | observable | experiment
    substitution = "substitution" NAME "on" "{" letter {"," letter} "}"
                   "{" { letter "->" STRING ";" } "}"
    morse        = "morse" NAME "over" group "blocks"
                   "[" { STRING "," } "repeat" STRING "]"
    group        = "Z2" | "Zn" "(" INT ")" | "Sym" "(" INT ")" | "cover-of" NAME
    rs           = "rs" NAME "pattern" STRING
    veech        = "veech" NAME "base" INT "group" group
                   "psi" [STRING] "repeat" STRING
    observable   = "observable" NAME "=" obs
    obs          = "walsh" "{" [INT {"," INT}] "}"
                 | "indicator" STRING "at" INT
                 | "table" "{" key ":" number {"," key ":" number} "}"
    experiment   = "experiment" NAME "{" { field ";" } "}"
    field        = "system" ":" NAME | "observable" ":" NAME
                 | "weight" ":" ("moebius" | "liouville" | "none")
                 | "N" ":" INT
                 | "checkpoints" ":" ("pow2" | "[" INT {"," INT} "]")
                 | "kbsz" ":" "(" INT "," INT ")"

Parsing is all or nothing: parse_spec returns a SpecDocument only when no
diagnostic was raised, otherwise the list of diagnostics.  Every diagnostic
carries the line, column, and source line of the offending token.  Document
equality ignores source positions, so parse(print_spec(doc)) == doc.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DECL_KEYWORDS = ("substitution", "morse", "rs", "veech", "observable", "experiment")
WEIGHT_NAMES = ("moebius", "liouville", "none")
_PUNCT = set("{}[](),;:=")


@dataclass(frozen=True)
class Span:
    line: int
    column: int


_NO_SPAN = Span(0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int
    excerpt: str

    def render(self) -> str:
        return "%s: line %d, column %d: %s\n  %s" % (
            self.severity,
            self.line,
            self.column,
            self.message,
            self.excerpt,
        )


@dataclass(frozen=True)
class GroupExpr:
    kind: str  # "Z2" | "Zn" | "Sym" | "cover"
    param: object = None  # int for Zn/Sym, substitution name for cover
    span: Span = field(default=_NO_SPAN, compare=False)

    def render(self) -> str:
        if self.kind == "Z2":
            return "Z2"
        if self.kind == "cover":
            return "cover-of %s" % self.param
        return "%s(%d)" % (self.kind, self.param)


@dataclass(frozen=True)
class SubstitutionDecl:
    name: str
    letters: tuple
    rules: tuple  # ((letter, image string), ...) in source order
    span: Span = field(default=_NO_SPAN, compare=False)
    rule_spans: tuple = field(default=(), compare=False)

    def rule_span(self, i: int) -> Span:
        return self.rule_spans[i] if i < len(self.rule_spans) else self.span


@dataclass(frozen=True)
class MorseDecl:
    name: str
    group: GroupExpr
    blocks: tuple  # head block strings
    tail: str
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class RsDecl:
    name: str
    pattern: str
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class VeechDecl:
    name: str
    base: int
    group: GroupExpr
    psi_head: str
    psi_tail: str
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class ObservableDecl:
    name: str
    kind: str  # "walsh" | "indicator" | "table"
    coords: tuple = ()
    block: str = ""
    offset: int = 0
    entries: tuple = ()  # ((key string, float value), ...)
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class ExperimentDecl:
    name: str
    system: str
    observable: str
    weight: str = "none"
    sample_size: int = 0
    checkpoints: object = "pow2"  # "pow2" or tuple of ints
    kbsz: tuple | None = None
    span: Span = field(default=_NO_SPAN, compare=False)


SYSTEM_DECLS = (SubstitutionDecl, MorseDecl, RsDecl, VeechDecl)


@dataclass(frozen=True)
class SpecDocument:
    declarations: tuple

    def systems(self) -> dict:
        return {d.name: d for d in self.declarations if isinstance(d, SYSTEM_DECLS)}

    def observables(self) -> dict:
        return {d.name: d for d in self.declarations if isinstance(d, ObservableDecl)}

    def experiments(self) -> list:
        return [d for d in self.declarations if isinstance(d, ExperimentDecl)]


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT NUMBER STRING PUNCT ARROW MINUS EOF
    text: str
    line: int
    column: int
    line_text: str


class _LexError(Exception):
    def __init__(self, message, line, column, line_text):
        super().__init__(message)
        self.diagnostic = Diagnostic("error", message, line, column, line_text)


def _tokenize(text: str):
    tokens = []
    lines = text.split("\n")
    for lineno, line in enumerate(lines, start=1):
        i = 0
        while i < len(line):
            c = line[i]
            col = i + 1
            if c in " \t\r":
                i += 1
                continue
            if c == "#":
                break
            if c == '"':
                j = line.find('"', i + 1)
                if j < 0:
                    raise _LexError("unterminated string", lineno, col, line)
                tokens.append(_Token("STRING", line[i + 1 : j], lineno, col, line))
                i = j + 1
                continue
            if c.isalpha() or c == "_":
                j = i + 1
                while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                tokens.append(_Token("IDENT", line[i:j], lineno, col, line))
                i = j
                continue
            if c.isdigit():
                j = i + 1
                while j < len(line) and (line[j].isdigit() or line[j] in ".eE"):
                    if line[j] in "eE" and j + 1 < len(line) and line[j + 1] in "+-":
                        j += 1
                    j += 1
                tokens.append(_Token("NUMBER", line[i:j], lineno, col, line))
                i = j
                continue
            if c == "-":
                if i + 1 < len(line) and line[i + 1] == ">":
                    tokens.append(_Token("ARROW", "->", lineno, col, line))
                    i += 2
                else:
                    tokens.append(_Token("MINUS", "-", lineno, col, line))
                    i += 1
                continue
            if c in _PUNCT:
                tokens.append(_Token("PUNCT", c, lineno, col, line))
                i += 1
                continue
            raise _LexError("unexpected character %r" % c, lineno, col, line)
    last_line = lines[-1] if lines else ""
    tokens.append(_Token("EOF", "", len(lines), len(last_line) + 1, last_line))
    return tokens


class _ParseAbort(Exception):
    """Raised to unwind to the declaration loop after recording a diagnostic."""


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics = []

    # token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind, text=None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def error(self, message, tok=None):
        tok = tok or self.peek()
        self.diagnostics.append(Diagnostic("error", message, tok.line, tok.column, tok.line_text))
        raise _ParseAbort()

    def expect(self, kind, text=None, what=None) -> _Token:
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.advance()
        want = what or (text if text is not None else kind.lower())
        found = tok.text if tok.kind != "EOF" else "end of input"
        self.error("expected %s, found %r" % (want, found))

    def expect_punct(self, char) -> _Token:
        return self.expect("PUNCT", char, "'%s'" % char)

    def expect_keyword(self, word) -> _Token:
        return self.expect("IDENT", word, "'%s'" % word)

    def expect_name(self, what="a name") -> str:
        tok = self.peek()
        if tok.kind != "IDENT":
            self.error("expected %s, found %r" % (what, tok.text or "end of input"))
        if tok.text in DECL_KEYWORDS:
            self.error("%r is a reserved keyword" % tok.text)
        return self.advance().text

    def expect_int(self, what="an integer") -> int:
        tok = self.peek()
        if tok.kind != "NUMBER" or not tok.text.isdigit():
            self.error("expected %s, found %r" % (what, tok.text or "end of input"))
        return int(self.advance().text)

    def expect_string(self, what="a quoted string") -> _Token:
        tok = self.peek()
        if tok.kind != "STRING":
            self.error("expected %s, found %r" % (what, tok.text or "end of input"))
        return self.advance()

    def expect_letter(self, what="a single-character letter") -> str:
        tok = self.peek()
        if tok.kind not in ("IDENT", "NUMBER") or len(tok.text) != 1:
            self.error("expected %s, found %r" % (what, tok.text or "end of input"))
        return self.advance().text

    def expect_number(self) -> float:
        sign = 1.0
        if self.at("MINUS"):
            self.advance()
            sign = -1.0
        tok = self.peek()
        if tok.kind != "NUMBER":
            self.error("expected a number, found %r" % (tok.text or "end of input"))
        self.advance()
        try:
            return sign * float(tok.text)
        except ValueError:
            self.error("malformed number %r" % tok.text, tok)

    # recovery

    def skip_to_next_declaration(self):
        depth = 0
        while not self.at("EOF"):
            tok = self.peek()
            if depth <= 0 and tok.kind == "IDENT" and tok.text in DECL_KEYWORDS:
                return
            if tok.kind == "PUNCT" and tok.text in "{[(":
                depth += 1
            elif tok.kind == "PUNCT" and tok.text in ")]}":
                depth -= 1
            self.advance()

    # grammar

    def parse_document(self):
        decls = []
        while not self.at("EOF"):
            tok = self.peek()
            if tok.kind != "IDENT" or tok.text not in DECL_KEYWORDS:
                self.diagnostics.append(
                    Diagnostic(
                        "error",
                        "expected a declaration keyword (%s), found %r" % (", ".join(DECL_KEYWORDS), tok.text),
                        tok.line,
                        tok.column,
                        tok.line_text,
                    )
                )
                self.advance()
                self.skip_to_next_declaration()
                continue
            try:
                decls.append(getattr(self, "parse_" + tok.text)())
            except _ParseAbort:
                self.skip_to_next_declaration()
        return decls

    def parse_substitution(self):
        start = self.expect_keyword("substitution")
        name = self.expect_name("a substitution name")
        self.expect_keyword("on")
        self.expect_punct("{")
        letters = [self.expect_letter()]
        while self.at("PUNCT", ","):
            self.advance()
            letters.append(self.expect_letter())
        self.expect_punct("}")
        self.expect_punct("{")
        rules = []
        rule_spans = []
        while not self.at("PUNCT", "}"):
            if self.at("EOF"):
                self.error("unterminated substitution body")
            letter_tok = self.peek()
            letter = self.expect_letter("a letter on the left of '->'")
            if letter not in letters:
                self.error("unknown letter %r (alphabet is {%s})" % (letter, ", ".join(letters)), letter_tok)
            self.expect("ARROW", what="'->'")
            image = self.expect_string("a quoted image word")
            self.expect_punct(";")
            rules.append((letter, image.text))
            rule_spans.append(Span(image.line, image.column))
        self.expect_punct("}")
        return SubstitutionDecl(
            name, tuple(letters), tuple(rules), Span(start.line, start.column), tuple(rule_spans)
        )

    def parse_group(self) -> GroupExpr:
        tok = self.peek()
        if tok.kind != "IDENT":
            self.error("expected a group (Z2, Zn(k), Sym(r), cover-of NAME), found %r" % (tok.text or "end of input"))
        span = Span(tok.line, tok.column)
        word = self.advance().text
        if word == "Z2":
            return GroupExpr("Z2", None, span)
        if word in ("Zn", "Sym"):
            self.expect_punct("(")
            value = self.expect_int("the %s parameter" % word)
            self.expect_punct(")")
            return GroupExpr(word, value, span)
        if word == "cover":
            self.expect("MINUS", what="'-' of cover-of")
            self.expect_keyword("of")
            target = self.expect_name("a substitution name")
            return GroupExpr("cover", target, span)
        self.error("unknown group %r (expected Z2, Zn(k), Sym(r), cover-of NAME)" % word, tok)

    def parse_morse(self):
        start = self.expect_keyword("morse")
        name = self.expect_name("a morse system name")
        self.expect_keyword("over")
        group = self.parse_group()
        blocks = []
        tail = ""  # empty tail means "inherit the cover block"
        if self.at("IDENT", "blocks"):
            self.advance()
            self.expect_punct("[")
            while True:
                if self.at("IDENT", "repeat"):
                    self.advance()
                    tail = self.expect_string("the repeated block").text
                    break
                blocks.append(self.expect_string("a block or 'repeat'").text)
                if self.at("PUNCT", ","):
                    self.advance()
                    continue
                self.error("expected ',' or 'repeat', found %r" % (self.peek().text or "end of input"))
            self.expect_punct("]")
        return MorseDecl(name, group, tuple(blocks), tail, Span(start.line, start.column))

    def parse_rs(self):
        start = self.expect_keyword("rs")
        name = self.expect_name("an rs system name")
        self.expect_keyword("pattern")
        pattern = self.expect_string("a pattern string")
        return RsDecl(name, pattern.text, Span(start.line, start.column))

    def parse_veech(self):
        start = self.expect_keyword("veech")
        name = self.expect_name("a veech system name")
        self.expect_keyword("base")
        base = self.expect_int("the odometer base")
        self.expect_keyword("group")
        group = self.parse_group()
        self.expect_keyword("psi")
        head = ""
        if self.at("STRING"):
            head = self.advance().text
        self.expect_keyword("repeat")
        tail = self.expect_string("the repeated psi block").text
        return VeechDecl(name, base, group, head, tail, Span(start.line, start.column))

    def parse_observable(self):
        start = self.expect_keyword("observable")
        name = self.expect_name("an observable name")
        self.expect_punct("=")
        tok = self.peek()
        if tok.kind != "IDENT":
            self.error("expected walsh, indicator, or table, found %r" % (tok.text or "end of input"))
        kind = self.advance().text
        span = Span(start.line, start.column)
        if kind == "walsh":
            self.expect_punct("{")
            coords = []
            if not self.at("PUNCT", "}"):
                coords.append(self.expect_int("a window coordinate"))
                while self.at("PUNCT", ","):
                    self.advance()
                    coords.append(self.expect_int("a window coordinate"))
            self.expect_punct("}")
            return ObservableDecl(name, "walsh", coords=tuple(coords), span=span)
        if kind == "indicator":
            block = self.expect_string("a block string")
            self.expect_keyword("at")
            offset = self.expect_int("the window offset")
            return ObservableDecl(name, "indicator", block=block.text, offset=offset, span=span)
        if kind == "table":
            self.expect_punct("{")
            entries = [self.parse_table_entry()]
            while self.at("PUNCT", ","):
                self.advance()
                entries.append(self.parse_table_entry())
            self.expect_punct("}")
            return ObservableDecl(name, "table", entries=tuple(entries), span=span)
        self.error("unknown observable kind %r (expected walsh, indicator, or table)" % kind, tok)

    def parse_table_entry(self):
        tok = self.peek()
        if tok.kind not in ("IDENT", "NUMBER"):
            self.error("expected a symbol key, found %r" % (tok.text or "end of input"))
        key = self.advance().text
        self.expect_punct(":")
        return (key, self.expect_number())

    def parse_experiment(self):
        start = self.expect_keyword("experiment")
        name = self.expect_name("an experiment name")
        self.expect_punct("{")
        fields = {}
        order = ("system", "observable", "weight", "N", "checkpoints", "kbsz")
        while not self.at("PUNCT", "}"):
            if self.at("EOF"):
                self.error("unterminated experiment body")
            key_tok = self.peek()
            if key_tok.kind != "IDENT" or key_tok.text not in order:
                self.error("unknown experiment field %r (expected one of %s)" % (key_tok.text, ", ".join(order)))
            key = self.advance().text
            if key in fields:
                self.error("duplicate field %r" % key, key_tok)
            self.expect_punct(":")
            fields[key] = self.parse_experiment_value(key)
            self.expect_punct(";")
        self.expect_punct("}")
        for required in ("system", "observable", "N"):
            if required not in fields:
                self.error("experiment %r is missing the %r field" % (name, required), start)
        return ExperimentDecl(
            name=name,
            system=fields["system"],
            observable=fields["observable"],
            weight=fields.get("weight", "none"),
            sample_size=fields["N"],
            checkpoints=fields.get("checkpoints", "pow2"),
            kbsz=fields.get("kbsz"),
            span=Span(start.line, start.column),
        )

    def parse_experiment_value(self, key):
        if key in ("system", "observable"):
            return self.expect_name("a declared name")
        if key == "weight":
            tok = self.peek()
            if tok.kind != "IDENT" or tok.text not in WEIGHT_NAMES:
                self.error("weight must be one of %s, found %r" % (", ".join(WEIGHT_NAMES), tok.text))
            return self.advance().text
        if key == "N":
            return self.expect_int("the sample size")
        if key == "checkpoints":
            if self.at("IDENT", "pow2"):
                self.advance()
                return "pow2"
            self.expect_punct("[")
            points = [self.expect_int("a checkpoint")]
            while self.at("PUNCT", ","):
                self.advance()
                points.append(self.expect_int("a checkpoint"))
            self.expect_punct("]")
            return tuple(points)
        if key == "kbsz":
            self.expect_punct("(")
            r = self.expect_int("a prime")
            self.expect_punct(",")
            s = self.expect_int("a prime")
            self.expect_punct(")")
            return (r, s)
        raise AssertionError(key)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _symbol_value(ch: str) -> int:
    """Block symbols are base-36 digits of the element index."""
    try:
        return int(ch, 36)
    except ValueError:
        return -1


def _static_group_order(group: GroupExpr):
    if group.kind == "Z2":
        return 2
    if group.kind == "Zn":
        return group.param
    if group.kind == "Sym":
        order = 1
        for k in range(2, group.param + 1):
            order *= k
        return order
    return None  # cover groups are only known after closure


def _static_alphabet(decl):
    if isinstance(decl, SubstitutionDecl):
        return len(decl.letters)
    if isinstance(decl, RsDecl):
        return 2
    if isinstance(decl, (MorseDecl, VeechDecl)):
        return _static_group_order(decl.group)
    return None


class _Validator:
    def __init__(self, declarations, source_lines):
        self.declarations = declarations
        self.source_lines = source_lines
        self.diagnostics = []

    def error(self, message, span):
        excerpt = ""
        if 1 <= span.line <= len(self.source_lines):
            excerpt = self.source_lines[span.line - 1]
        self.diagnostics.append(Diagnostic("error", message, span.line, span.column, excerpt))

    def run(self):
        systems = {}
        observables = {}
        experiments = {}
        for decl in self.declarations:
            if isinstance(decl, SYSTEM_DECLS):
                scope = systems
            elif isinstance(decl, ObservableDecl):
                scope = observables
            else:
                scope = experiments
            if decl.name in scope:
                first = scope[decl.name].span
                self.error(
                    "duplicate name %r (first declared at line %d, column %d)" % (decl.name, first.line, first.column),
                    decl.span,
                )
            else:
                scope[decl.name] = decl

        for decl in self.declarations:
            if isinstance(decl, SubstitutionDecl):
                self.check_substitution(decl)
            elif isinstance(decl, MorseDecl):
                self.check_morse(decl, systems)
            elif isinstance(decl, RsDecl):
                self.check_rs(decl)
            elif isinstance(decl, VeechDecl):
                self.check_veech(decl, systems)
            elif isinstance(decl, ExperimentDecl):
                self.check_experiment(decl, systems, observables)
        return self.diagnostics

    def check_substitution(self, decl):
        if len(set(decl.letters)) != len(decl.letters):
            self.error("alphabet letters must be distinct", decl.span)
            return
        ruled = [letter for letter, _ in decl.rules]
        for i, letter in enumerate(ruled):
            if letter in ruled[:i]:
                self.error("letter %r has more than one rule" % letter, decl.rule_span(i))
                return
        missing = [l for l in decl.letters if l not in ruled]
        if missing:
            self.error("missing rules for letters %s" % ", ".join(missing), decl.span)
            return
        lengths = set()
        for i, (letter, image) in enumerate(decl.rules):
            for c in image:
                if c not in decl.letters:
                    self.error("rule for %r uses unknown letter %r" % (letter, c), decl.rule_span(i))
                    return
            lengths.add(len(image))
        if len(lengths) != 1:
            first = len(decl.rules[0][1])
            i = next(i for i, (_, image) in enumerate(decl.rules) if len(image) != first)
            self.error(
                "rule for %r has length %d, others have %d" % (decl.rules[i][0], len(decl.rules[i][1]), first),
                decl.rule_span(i),
            )
        elif lengths.pop() < 2:
            self.error("substitution length must be at least 2", decl.span)

    def check_group(self, group: GroupExpr, systems):
        if group.kind == "Zn" and group.param < 2:
            self.error("Zn needs n >= 2, got %d" % group.param, group.span)
        elif group.kind == "Sym" and not 1 <= group.param <= 6:
            self.error("Sym needs degree 1..6, got %d" % group.param, group.span)
        elif group.kind == "cover":
            target = systems.get(group.param)
            if target is None:
                self.error("cover-of refers to unknown system %r" % group.param, group.span)
            elif not isinstance(target, SubstitutionDecl):
                self.error("cover-of needs a substitution, %r is not one" % group.param, group.span)

    def check_block_word(self, word, order, what, span, identity_start):
        if len(word) < 2:
            self.error("%s needs at least two symbols, got %r" % (what, word), span)
            return
        for c in word:
            v = _symbol_value(c)
            if v < 0 or (order is not None and v >= order):
                self.error("%s symbol %r is outside the group" % (what, c), span)
                return
        if identity_start and _symbol_value(word[0]) != 0:
            self.error("%s must start at the identity symbol 0, got %r" % (what, word), span)

    def check_morse(self, decl, systems):
        self.check_group(decl.group, systems)
        if decl.group.kind == "cover":
            if decl.blocks or decl.tail:
                self.error("cover-of systems take their block from the cover; drop the blocks clause", decl.span)
            return
        if not decl.tail:
            self.error("missing blocks clause (blocks [..., repeat \"...\"])", decl.span)
            return
        order = _static_group_order(decl.group)
        for word in decl.blocks + (decl.tail,):
            self.check_block_word(word, order, "block", decl.span, identity_start=True)

    def check_rs(self, decl):
        from .arith import DigitPattern

        try:
            DigitPattern(decl.pattern)
        except ValueError as exc:
            self.error(str(exc), decl.span)

    def check_veech(self, decl, systems):
        if decl.base < 2:
            self.error("odometer base must be at least 2, got %d" % decl.base, decl.span)
        self.check_group(decl.group, systems)
        order = _static_group_order(decl.group)
        if not decl.psi_tail:
            self.error("psi repeat block must be nonempty", decl.span)
        for word, what in ((decl.psi_head, "psi head"), (decl.psi_tail, "psi repeat block")):
            for c in word:
                v = _symbol_value(c)
                if v < 0 or (order is not None and v >= order):
                    self.error("%s symbol %r is outside the group" % (what, c), decl.span)
                    return

    def check_experiment(self, decl, systems, observables):
        system = systems.get(decl.system)
        if system is None:
            self.error("experiment refers to unknown system %r" % decl.system, decl.span)
        obs = observables.get(decl.observable)
        if obs is None:
            self.error("experiment refers to unknown observable %r" % decl.observable, decl.span)
        if decl.sample_size < 1:
            self.error("N must be positive, got %d" % decl.sample_size, decl.span)
        if decl.checkpoints != "pow2":
            points = decl.checkpoints
            if any(b <= a for a, b in zip(points, points[1:])) or (points and points[0] < 1):
                self.error("checkpoints must be strictly ascending and positive", decl.span)
            elif points and points[-1] > decl.sample_size:
                self.error("checkpoint %d is beyond N = %d" % (points[-1], decl.sample_size), decl.span)
        if decl.kbsz is not None:
            r, s = decl.kbsz
            if r == s or not (_is_prime(r) and _is_prime(s)):
                self.error("kbsz needs two distinct primes, got (%d, %d)" % (r, s), decl.span)
        if system is not None and obs is not None:
            self.check_binding(decl, system, obs)

    def check_binding(self, decl, system, obs):
        alphabet = _static_alphabet(system)
        if alphabet is None:
            return  # cover group orders are only known at run time
        if obs.kind == "walsh" and alphabet != 2:
            self.error(
                "walsh observables need a binary alphabet, system %r has %d symbols" % (system.name, alphabet),
                decl.span,
            )
        elif obs.kind == "indicator":
            for c in obs.block:
                v = _symbol_value(c) if not isinstance(system, SubstitutionDecl) else _letter_index(system, c)
                if v is None or v < 0 or v >= alphabet:
                    self.error("indicator symbol %r is outside system %r" % (c, system.name), decl.span)
                    return
        elif obs.kind == "table":
            covered = set()
            for key, _ in obs.entries:
                idx = _resolve_key(system, key, alphabet)
                if idx is None:
                    self.error("table key %r is outside system %r" % (key, system.name), decl.span)
                    return
                covered.add(idx)
            if len(covered) != alphabet:
                missing = sorted(set(range(alphabet)) - covered)
                self.error("table does not cover symbols %s of system %r" % (missing, system.name), decl.span)


def _letter_index(decl: SubstitutionDecl, ch: str):
    try:
        return decl.letters.index(ch)
    except ValueError:
        return None


def _resolve_key(system, key: str, alphabet: int):
    if isinstance(system, SubstitutionDecl):
        idx = _letter_index(system, key)
        if idx is not None:
            return idx
    if key.isdigit():
        idx = int(key)
        return idx if 0 <= idx < alphabet else None
    if len(key) == 1:
        idx = _symbol_value(key)
        return idx if 0 <= idx < alphabet else None
    return None


def parse_spec(text: str):
    """Parse a document; returns SpecDocument or the list of Diagnostics."""
    try:
        tokens = _tokenize(text)
    except _LexError as exc:
        return [exc.diagnostic]
    parser = _Parser(tokens)
    decls = parser.parse_document()
    diagnostics = list(parser.diagnostics)
    if not diagnostics:
        diagnostics.extend(_Validator(decls, text.split("\n")).run())
    if diagnostics:
        return diagnostics
    return SpecDocument(tuple(decls))


def _render_value(v: float) -> str:
    if v == int(v):
        return "%d" % int(v)
    return repr(v)


def print_spec(doc: SpecDocument) -> str:
    """Canonical form; parse(print_spec(doc)) equals doc."""
    chunks = []
    for decl in doc.declarations:
        if isinstance(decl, SubstitutionDecl):
            lines = ["substitution %s on {%s} {" % (decl.name, ", ".join(decl.letters))]
            for letter, image in decl.rules:
                lines.append('  %s -> "%s";' % (letter, image))
            lines.append("}")
            chunks.append("\n".join(lines))
        elif isinstance(decl, MorseDecl):
            if decl.tail:
                parts = ['"%s", ' % b for b in decl.blocks]
                suffix = ' blocks [%srepeat "%s"]' % ("".join(parts), decl.tail)
            else:
                suffix = ""
            chunks.append("morse %s over %s%s" % (decl.name, decl.group.render(), suffix))
        elif isinstance(decl, RsDecl):
            chunks.append('rs %s pattern "%s"' % (decl.name, decl.pattern))
        elif isinstance(decl, VeechDecl):
            head = '"%s" ' % decl.psi_head if decl.psi_head else ""
            chunks.append(
                'veech %s base %d group %s psi %srepeat "%s"'
                % (decl.name, decl.base, decl.group.render(), head, decl.psi_tail)
            )
        elif isinstance(decl, ObservableDecl):
            if decl.kind == "walsh":
                chunks.append("observable %s = walsh {%s}" % (decl.name, ", ".join(map(str, decl.coords))))
            elif decl.kind == "indicator":
                chunks.append('observable %s = indicator "%s" at %d' % (decl.name, decl.block, decl.offset))
            else:
                body = ", ".join("%s: %s" % (k, _render_value(v)) for k, v in decl.entries)
                chunks.append("observable %s = table {%s}" % (decl.name, body))
        elif isinstance(decl, ExperimentDecl):
            lines = ["experiment %s {" % decl.name]
            lines.append("  system: %s;" % decl.system)
            lines.append("  observable: %s;" % decl.observable)
            lines.append("  weight: %s;" % decl.weight)
            lines.append("  N: %d;" % decl.sample_size)
            if decl.checkpoints == "pow2":
                lines.append("  checkpoints: pow2;")
            else:
                lines.append("  checkpoints: [%s];" % ", ".join(map(str, decl.checkpoints)))
            if decl.kbsz is not None:
                lines.append("  kbsz: (%d, %d);" % decl.kbsz)
            lines.append("}")
            chunks.append("\n".join(lines))
        else:
            raise TypeError("unknown declaration %r" % (decl,))
    return "\n\n".join(chunks) + "\n"
