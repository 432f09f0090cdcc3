# Exception hierarchy shared by the library and the command line


class QuiverStabError(Exception):
    """Base class of every error raised by quiverstab."""


class InputError(QuiverStabError, ValueError):
    """A precondition on the inputs is violated."""


class InfeasibleError(QuiverStabError):
    """A configured enumeration cap would be exceeded."""


class InvariantError(QuiverStabError, ArithmeticError):
    """An internal consistency check failed. Always a bug."""


# exit codes used by the command line
EXIT_CODES = {
    InputError: 1,
    InfeasibleError: 2,
    InvariantError: 3,
}


def exit_code_for(error: QuiverStabError) -> int:
    for cls, code in EXIT_CODES.items():
        if isinstance(error, cls):
            return code
    return 3
