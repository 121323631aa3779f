class AbcError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AbcError):
    def __init__(self, message, line=0, column=0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        self.reason = message
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(text)


class LoadError(AbcError):
    """A program parsed but is not well formed (unresolved call, duplicate id...)."""


class EvalFault(AbcError):
    """An expression could not be evaluated (ill-typed operands, undef, unbound name)."""


class SemanticsAbort(AbcError):
    """Evaluation fault in an output expression or update: a program bug.

    ``step`` is filled in by the simulator when the abort happens during a run.
    """

    def __init__(self, message, component=None, step=None):
        self.component = component
        self.step = step
        self.detail = message
        super().__init__(self._text())

    def _text(self):
        where = f"component {self.component}: " if self.component is not None else ""
        at = f"step {self.step}: " if self.step is not None else ""
        return at + where + self.detail

    def at_step(self, step):
        self.step = step
        self.args = (self._text(),)
        return self
