"""Recursive-descent parser for MontiArc compilation units.

The accepted language is the readable ArcD/MontiArc grammar:

    unit        := ["package" qname ";"] import* component
    import      := "import" qname ["." "*"] ";"
    component   := stereo? "component" Name Name? typeparams? ["[" params "]"]
                   ["extends" reftype] "{" config* element* "}"
    element     := interface | subcomponent | component | connector | invariant
    interface   := stereo? "port" [port ("," port)*] ";"
    port        := stereo? ("in" | "out") type Name?
    subcomponent:= stereo? "component" reftype ["(" args ")"] [instance ("," instance)*] ";"
    instance    := Name ["[" simple (";" simple)* "]"]
    connector   := stereo? "connect" qname "->" qname ("," qname)* ";"
    invariant   := Name? "inv" Name ":" content ";"
"""

from __future__ import annotations

from montiarc.diagnostics import Diagnostic, Span
from montiarc.syntax import ast
from montiarc.syntax.lexer import LexError, Tok, Token, token_span, tokenize


class ParseError(Exception):
    """Raised when source text is not a syntactically valid compilation unit."""

    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        super().__init__("; ".join(d.format() for d in diagnostics))
        self.diagnostics = diagnostics


def parse_compilation_unit(text: str, source_id: str = "<input>") -> ast.CompilationUnit:
    """Parse one ``.arc`` file.

    Raises:
        ParseError: carrying P001 (syntax) or P002 (unterminated comment or
            invariant body) diagnostics.
    """
    try:
        tokens = tokenize(text)
    except LexError as e:
        span = Span(source_id, e.line, e.col, e.line, e.col)
        raise ParseError([Diagnostic.error(e.code, span, e.message)]) from None
    return _Parser(text, tokens, source_id).unit()


_CONFIG_KINDS = {
    "autoconnect": ast.ConfigKind.AUTOCONNECT,
    "autoinstantiate": ast.ConfigKind.AUTOINSTANTIATE,
    "behavior": ast.ConfigKind.TIMING,
}


class _Fail(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        self.diagnostic = diagnostic


class _Parser:
    def __init__(self, text: str, tokens: list[Token], source_id: str) -> None:
        self.text = text
        self.toks = tokens
        self.pos = 0
        self.file = source_id

    # -- token helpers -------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    @property
    def prev(self) -> Token:
        return self.toks[self.pos - 1]

    def at(self, text: str) -> bool:
        return self.cur.is_(text)

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind is not Tok.EOF:
            self.pos += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def error(self, expected: str, tok: Token | None = None, code: str = "P001") -> _Fail:
        tok = tok or self.cur
        msg = f"unexpected {tok.describe()}, expected {expected}"
        return _Fail(Diagnostic.error(code, self.span(tok), msg))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        return self.advance()

    def name(self, what: str = "identifier") -> Token:
        tok = self.cur
        if tok.kind is not Tok.IDENT:
            if tok.kind is Tok.KEYWORD:
                raise _Fail(
                    Diagnostic.error("P001", self.span(tok), f"keyword {tok.text!r} cannot be used as {what}")
                )
            raise self.error(what)
        return self.advance()

    def span(self, first: Token, last: Token | None = None) -> Span:
        return token_span(self.file, first, last)

    def span_from(self, first: Token) -> Span:
        return self.span(first, self.prev)

    # -- entry point ---------------------------------------------------

    def unit(self) -> ast.CompilationUnit:
        try:
            package: tuple[str, ...] = ()
            if self.accept("package"):
                package = self.qualified_name().parts
                self.expect(";")
            imports = []
            while self.at("import"):
                imports.append(self.import_decl())
            if self.cur.kind is Tok.EOF:
                raise self.error("'component'")
            root = self.component_definition()
            if self.cur.kind is not Tok.EOF:
                raise self.error("end of input")
        except _Fail as f:
            raise ParseError([f.diagnostic]) from None
        return ast.CompilationUnit(package, tuple(imports), root, self.file)

    def import_decl(self) -> ast.ImportDecl:
        first = self.expect("import")
        parts = [self.name().text]
        wildcard = False
        while self.accept("."):
            if self.accept("*"):
                wildcard = True
                break
            parts.append(self.name().text)
        self.expect(";")
        return ast.ImportDecl(ast.QualifiedName(tuple(parts)), wildcard, self.span_from(first))

    # -- names and types -----------------------------------------------

    def qualified_name(self) -> ast.QualifiedName:
        first = self.name()
        parts = [first.text]
        while self.at(".") and self.peek().kind in (Tok.IDENT, Tok.KEYWORD):
            self.advance()
            parts.append(self.name().text)
        return ast.QualifiedName(tuple(parts), self.span_from(first))

    def type_expr(self) -> ast.TypeExpr:
        first = self.cur
        base = self.qualified_name()
        args: list[ast.TypeExpr] = []
        if self.at("<"):
            args = self.type_args()
        dims = 0
        while self.at("[") and self.peek().is_("]"):
            self.advance()
            self.advance()
            dims += 1
        return ast.TypeExpr(base, tuple(args), dims, self.span_from(first))

    def type_args(self) -> list[ast.TypeExpr]:
        self.expect("<")
        args = [self.type_expr()]
        while self.accept(","):
            args.append(self.type_expr())
        self.expect(">")
        return args

    def stereotype(self) -> ast.Stereotype:
        if not (self.at("<") and self.peek().is_("<")):
            return ()
        self.advance()
        self.advance()
        values = [self.stereo_value()]
        while self.accept(","):
            values.append(self.stereo_value())
        self.expect(">")
        self.expect(">")
        return tuple(values)

    def stereo_value(self) -> ast.StereoValue:
        name = self.name("stereotype name").text
        value = None
        if self.accept("="):
            if self.cur.kind is not Tok.STRING:
                raise self.error("string literal")
            value = self.advance().text
        return ast.StereoValue(name, value)

    # -- components ----------------------------------------------------

    def component_definition(self) -> ast.ComponentTypeDecl:
        first = self.cur
        stereo = self.stereotype()
        self.expect("component")
        name_tok = self.name("component name")
        instance_tok = None
        if self.cur.kind is Tok.IDENT:
            instance_tok = self.advance()
        type_params: list[ast.TypeParam] = []
        if self.at("<"):
            type_params = self.type_params()
        params: list[ast.ConfigParam] = []
        if self.accept("["):
            if not self.at("]"):
                params.append(self.config_param())
                while self.accept(","):
                    params.append(self.config_param())
            self.expect("]")
        super_type = None
        if self.accept("extends"):
            super_type = self.type_expr()
        config, elements = self.component_body()
        return ast.ComponentTypeDecl(
            name=name_tok.text,
            instance_name=instance_tok.text if instance_tok else None,
            type_params=tuple(type_params),
            config_params=tuple(params),
            super_type=super_type,
            config_elements=tuple(config),
            elements=tuple(elements),
            stereotype=stereo,
            span=self.span_from(first),
            name_span=self.span(name_tok),
            instance_span=self.span(instance_tok) if instance_tok else None,
        )

    def type_params(self) -> list[ast.TypeParam]:
        self.expect("<")
        out = [self.type_param()]
        while self.accept(","):
            out.append(self.type_param())
        self.expect(">")
        return out

    def type_param(self) -> ast.TypeParam:
        tok = self.name("type parameter")
        bounds = []
        if self.accept("extends"):
            bounds.append(self.type_expr())
            while self.accept("&"):
                bounds.append(self.type_expr())
        return ast.TypeParam(tok.text, tuple(bounds), self.span_from(tok))

    def config_param(self) -> ast.ConfigParam:
        first = self.cur
        ptype = self.type_expr()
        name = self.name("parameter name").text
        return ast.ConfigParam(ptype, name, self.span_from(first))

    def component_body(self) -> tuple[list[ast.ConfigElement], list]:
        self.expect("{")
        config: list[ast.ConfigElement] = []
        elements: list = []
        while not self.at("}"):
            if self.cur.kind is Tok.EOF:
                raise self.error("'}'")
            kind = self._config_kind()
            if kind is not None:
                if elements:
                    tok = self.cur
                    raise _Fail(
                        Diagnostic.error(
                            "P001", self.span(tok),
                            f"configuration {tok.text!r} must precede all architectural elements",
                        )
                    )
                config.append(self.config_element(kind))
            else:
                elements.append(self.element())
        self.expect("}")
        return config, elements

    def _config_kind(self) -> ast.ConfigKind | None:
        return _CONFIG_KINDS.get(self.cur.text) if self.cur.kind is Tok.KEYWORD else None

    def config_element(self, kind: ast.ConfigKind) -> ast.ConfigElement:
        first = self.advance()
        stereo = self.stereotype()
        modes = ast.CONFIG_MODES[kind]
        tok = self.cur
        if tok.kind is not Tok.KEYWORD or tok.text not in modes:
            raise self.error(" or ".join(repr(m) for m in modes))
        self.advance()
        self.expect(";")
        return ast.ConfigElement(kind, tok.text, stereo, self.span_from(first))

    def element(self):
        tok = self.cur
        # Optional stereotype precedes port, component, and connect.
        save = self.pos
        self.stereotype()
        lead = self.cur
        self.pos = save
        if lead.is_("port"):
            return self.interface()
        if lead.is_("component"):
            if self._is_definition():
                return self.component_definition()
            return self.subcomponent()
        if lead.is_("connect"):
            return self.connector()
        if tok.is_("inv") or (tok.kind is Tok.IDENT and self.peek().is_("inv")):
            return self.invariant()
        raise self.error("'port', 'component', 'connect', or an invariant")

    def _is_definition(self) -> bool:
        """Peek past ``component`` to the first top-level ``{`` or ``;``."""
        depth = 0
        for tok in self.toks[self.pos:]:
            if tok.kind is Tok.EOF:
                return False
            if tok.is_("(") or tok.is_("["):
                depth += 1
            elif tok.is_(")") or tok.is_("]"):
                depth -= 1
            elif depth <= 0 and tok.is_("{"):
                return True
            elif depth <= 0 and tok.is_(";"):
                return False
        return False

    def interface(self) -> ast.PortInterfaceDecl:
        first = self.cur
        stereo = self.stereotype()
        self.expect("port")
        ports = []
        if not self.at(";"):
            ports.append(self.port())
            while self.accept(","):
                ports.append(self.port())
        self.expect(";")
        return ast.PortInterfaceDecl(tuple(ports), stereo, self.span_from(first))

    def port(self) -> ast.PortDecl:
        first = self.cur
        stereo = self.stereotype()
        if self.accept("in"):
            direction = ast.Direction.IN
        elif self.accept("out"):
            direction = ast.Direction.OUT
        else:
            raise self.error("'in' or 'out'")
        ptype = self.type_expr()
        name = None
        if self.cur.kind is Tok.IDENT:
            name = self.advance().text
        elif self.cur.kind is Tok.KEYWORD and not self.cur.is_("in") and not self.cur.is_("out"):
            self.name("port name")
        return ast.PortDecl(direction, ptype, name, stereo, self.span_from(first))

    def subcomponent(self) -> ast.SubComponentDecl:
        first = self.cur
        stereo = self.stereotype()
        self.expect("component")
        ctype = self.type_expr()
        args: list[ast.ConfigArg] = []
        if self.accept("("):
            if not self.at(")"):
                args.append(self.config_arg())
                while self.accept(","):
                    args.append(self.config_arg())
            self.expect(")")
        instances = []
        if not self.at(";"):
            instances.append(self.instance())
            while self.accept(","):
                instances.append(self.instance())
        self.expect(";")
        return ast.SubComponentDecl(ctype, tuple(args), tuple(instances), stereo, self.span_from(first))

    def config_arg(self) -> ast.ConfigArg:
        tok = self.cur
        if tok.kind in (Tok.INT, Tok.CHAR, Tok.STRING) or tok.is_("true") or tok.is_("false"):
            self.advance()
            kind = {
                Tok.INT: ast.LiteralKind.INT,
                Tok.CHAR: ast.LiteralKind.CHAR,
                Tok.STRING: ast.LiteralKind.STRING,
            }.get(tok.kind, ast.LiteralKind.BOOL)
            return ast.ConfigArg(ast.ArgKind.LITERAL, literal=ast.Literal(kind, tok.text), span=self.span(tok))
        if tok.kind is not Tok.IDENT:
            raise self.error("literal or name")
        qn = self.qualified_name()
        kind = ast.ArgKind.REFERENCE if len(qn) > 1 else ast.ArgKind.VARIABLE
        return ast.ConfigArg(kind, name=qn, span=qn.span)

    def instance(self) -> ast.SubComponentInstance:
        tok = self.name("instance name")
        connectors = []
        if self.accept("["):
            connectors.append(self.simple_connector())
            while self.accept(";"):
                connectors.append(self.simple_connector())
            self.expect("]")
        return ast.SubComponentInstance(tok.text, tuple(connectors), self.span(tok))

    def simple_connector(self) -> ast.SimpleConnector:
        first = self.cur
        source = self.qualified_name()
        self.expect("->")
        targets = [self.qualified_name()]
        while self.accept(","):
            targets.append(self.qualified_name())
        return ast.SimpleConnector(source, tuple(targets), self.span_from(first))

    def connector(self) -> ast.ConnectorDecl:
        first = self.cur
        stereo = self.stereotype()
        self.expect("connect")
        source = self.qualified_name()
        self.expect("->")
        targets = [self.qualified_name()]
        while self.accept(","):
            targets.append(self.qualified_name())
        self.expect(";")
        return ast.ConnectorDecl(source, tuple(targets), stereo, self.span_from(first))

    def invariant(self) -> ast.InvariantDecl:
        first = self.cur
        kind = None
        if self.cur.kind is Tok.IDENT:
            kind = self.advance().text
        self.expect("inv")
        name = self.name("invariant name").text
        self.expect(":")
        body = self.invariant_body(first)
        return ast.InvariantDecl(name, body, kind, self.span_from(first))

    def invariant_body(self, first: Token) -> str:
        """Capture raw text up to the first top-level ``;``.

        A body that is a single braced block may omit the terminating ``;``.
        """
        start = self.cur
        if start.kind is Tok.EOF or start.is_(";"):
            raise self.error("invariant content")
        closers = {")": "(", "]": "[", "}": "{"}
        stack: list[str] = []
        while True:
            tok = self.cur
            if tok.kind is Tok.EOF:
                raise _Fail(Diagnostic.error("P002", self.span(first), "unterminated invariant body"))
            if tok.kind is Tok.PUNCT and tok.text in "([{":
                stack.append(tok.text)
            elif tok.kind is Tok.PUNCT and tok.text in closers:
                if not stack:
                    raise _Fail(Diagnostic.error("P002", self.span(first), "unterminated invariant body"))
                if stack.pop() != closers[tok.text]:
                    raise self.error("balanced brackets in invariant body")
                if not stack and start.is_("{") and tok.is_("}"):
                    self.advance()
                    body = self.text[start.start:tok.end]
                    self.accept(";")
                    return body
            elif not stack and tok.is_(";"):
                body = self.text[start.start:self.prev.end]
                self.advance()
                return body
            self.advance()
