"""Exception hierarchy.  Every user-facing failure derives from :class:`GradedError`."""


class GradedError(ValueError):
    pass


class SignatureError(GradedError):
    pass


class UnknownVariable(GradedError):
    def __init__(self, name):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


class SignatureMismatch(GradedError):
    pass


class FlavorMismatch(GradedError):
    pass


class WeightError(GradedError):
    pass


class NotHomogeneous(WeightError):
    pass


class OneSidedSignature(GradedError):
    pass


class ParseError(GradedError):
    def __init__(self, message, line=1, col=1):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
