from . import constants


class DetectionError(Exception):
    def __init__(
        self,
        msg: str,
        errorCode: str | None = None,
        exitCode: int | None = None,
        summary: str | None = None,
    ) -> None:
        """Base error for every numerical or configuration failure in mimodet.

        Args:
            msg (str): Message describing cause of error
            errorCode (str, optional): Constant from `mimodet.constants` identifying the failure. Defaults to None.
            exitCode (int, optional): Exit code the command line should terminate with. Defaults to 3.
            summary (str, optional): Describes the issue and maybe outlines steps to fix
        """
        self.message = msg
        self.errorCode = errorCode
        self.exitCode = exitCode or constants.EXIT_NUMERICAL_FAILURE
        self.summary = summary
        super().__init__(msg)


class DimensionMismatch(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.DIMENSION_MISMATCH, summary=summary)


class NumericalOverflow(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.NUMERICAL_OVERFLOW, summary=summary)


class NotHermitian(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.NOT_HERMITIAN, summary=summary)


class InvalidParameter(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.INVALID_PARAMETER, summary=summary)


class NearSingular(DetectionError):
    def __init__(
        self, msg: str, errorCode: str | None = None, summary: str | None = None
    ) -> None:
        super().__init__(msg, errorCode or constants.NEAR_SINGULAR, summary=summary)


class NotPositiveDefinite(NearSingular):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.NOT_POSITIVE_DEFINITE, summary)


class SingularTriangular(NearSingular):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.SINGULAR_TRIANGULAR, summary)


class Singular(NearSingular):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.SINGULAR, summary)


class Breakdown(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.BREAKDOWN, summary=summary)


class GapUndefined(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(msg, constants.GAP_UNDEFINED, summary=summary)


class ConfigError(DetectionError):
    def __init__(self, msg: str, summary: str | None = None) -> None:
        super().__init__(
            msg, constants.CONFIG_ERROR, constants.EXIT_CONFIG_ERROR, summary
        )


class DivergenceWarning(UserWarning):
    pass
