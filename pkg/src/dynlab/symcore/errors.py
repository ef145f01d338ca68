class SymcoreError(Exception):
    """Base class for expression-core failures."""


class ParseError(SymcoreError, ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        where = f" at position {position}"
        if text:
            where += f": {text[:position]}<here>{text[position:]}"
        super().__init__(message + where)


class UnboundSymbolError(SymcoreError, LookupError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"symbol {name!r} is not bound")

    def __str__(self):
        return self.args[0]


class DomainError(SymcoreError, ArithmeticError):
    """Evaluation left the real domain (division by zero, ln of x <= 0, ...)."""
