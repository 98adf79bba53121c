# declarative validation of experiment files
import re
import typing

from mimodet.exceptions import ConfigError
from .typecheck import isArray, isMap, isReal


class Rule:
    def __init__(self, _name: str = "value", nullable: bool = True) -> None:
        self.name = _name  # just a name to go by when reporting errors
        self.nullable = nullable  #: the value to be checked could be None

    def validate(self, other: typing.Any) -> None:
        pass

    def toJson(self) -> dict[str, typing.Any]:
        return {"name": self.name, "nullable": self.nullable, "type": "base"}

    def _checkNull(self, other: typing.Any) -> bool:
        """True when there is nothing more to validate."""
        if other is None:
            if not self.nullable:
                raise ConfigError(f"{self.name} is None but nullable flag is set to False")
            return True
        return False


class String(Rule):
    def __init__(
        self,
        _name: str = "value",
        nullable: bool = False,
        min_length: int | None = None,
        max_length: int | None = None,
        pattern: str | None = None,
        validators: list[typing.Callable[[str], bool]] | None = None,
    ) -> None:
        """Validates string values.

        Args:
            _name (str): A name to go by when reporting errors.
            nullable (bool): Whether the string value can be `None`.
            min_length (int): The minimum length of the string value.
            max_length (int): The maximum length of the string value.
            pattern (str): A regular expression pattern that the string value must match.
            validators (List[Callable[[str], bool]]): Additional checks on the value.

        Raises:
            ConfigError: If the string value is invalid.
        """
        super().__init__(nullable=nullable, _name=_name)
        self.min_length = min_length
        self.max_length = max_length
        self.pattern = pattern
        self.validators = validators or []

    def toJson(self) -> dict[str, typing.Any]:
        return {
            "type": "string",
            "name": self.name,
            "nullable": self.nullable,
            "min_length": self.min_length,
            "max_length": self.max_length,
            "pattern": self.pattern,
        }

    def validate(self, other: str | None) -> None:
        if self._checkNull(other):
            return
        if not isinstance(other, str):
            raise ConfigError(f"{self.name} is not a valid string")

        if self.min_length is not None and len(other) < self.min_length:
            raise ConfigError(
                f"{self.name} '{other}' is shorter than the minimum length of {self.min_length}"
            )
        if self.max_length is not None and len(other) > self.max_length:
            raise ConfigError(
                f"{self.name} '{other}' is longer than the maximum length of {self.max_length}"
            )
        if self.pattern is not None and not re.fullmatch(self.pattern, other):
            raise ConfigError(f"{self.name} '{other}' does not match the required pattern")
        for validator in self.validators:
            if not validator(other):
                raise ConfigError(f"{self.name} '{other}' failed validation")


class Number(Rule):
    """Validates numeric values. Booleans are rejected even though they are ints.

    Args:
        _name (str): A name to go by when reporting errors.
        nullable (bool): Whether the numeric value can be `None`.
        minimum (int|float|None): The minimum allowed value.
        maximum (int|float|None): The maximum allowed value.
        integer_only (bool): Whether the value must be an integer.

    Raises:
        ConfigError: If the numeric value is invalid.
    """

    def __init__(
        self,
        _name="value",
        nullable: bool = False,
        minimum: int | float | None = None,
        maximum: int | float | None = None,
        validators: list[typing.Callable[[int | float], bool]] | None = None,
        integer_only: bool = False,
    ) -> None:
        super().__init__(nullable=nullable, _name=_name)
        self.minimum = minimum
        self.maximum = maximum
        self.validators = validators or []
        self.integer_only = integer_only

    def toJson(self) -> dict[str, typing.Any]:
        return {
            "type": "number",
            "name": self.name,
            "nullable": self.nullable,
            "minimum": self.minimum,
            "maximum": self.maximum,
            "integer_only": self.integer_only,
        }

    def validate(self, other: int | float | None) -> None:
        if self._checkNull(other):
            return
        if not isReal(other):
            raise ConfigError(f"{self.name} is not a number value")

        if self.integer_only and not isinstance(other, int):
            raise ConfigError(f"{self.name}: {other} is not an integer")
        if self.minimum is not None and other < self.minimum:
            raise ConfigError(
                f"{self.name} is less than the minimum value of {self.minimum}"
            )
        if self.maximum is not None and other > self.maximum:
            raise ConfigError(
                f"{self.name} is greater than the maximum value of {self.maximum}"
            )
        for validator in self.validators:
            if not validator(other):
                raise ConfigError(f"{self.name}: {other} failed validation")


class Choice(Rule):
    """Value must be one of a fixed set (compared case-insensitively for strings)."""

    def __init__(
        self, choices: list[str], _name: str = "value", nullable: bool = False
    ) -> None:
        super().__init__(_name=_name, nullable=nullable)
        self.choices = choices

    def toJson(self) -> dict[str, typing.Any]:
        return {
            "type": "choice",
            "choices": self.choices,
            "name": self.name,
            "nullable": self.nullable,
        }

    def validate(self, other: str | None) -> None:
        if self._checkNull(other):
            return
        if not isinstance(other, str) or other.lower() not in self.choices:
            raise ConfigError(
                f"{self.name} '{other}' is not one of {', '.join(self.choices)}"
            )


class SnrRange(Rule):
    """`start:step:stop` in dB, inclusive of stop, strictly increasing."""

    def __init__(self, _name: str = "value", nullable: bool = False) -> None:
        super().__init__(_name=_name, nullable=nullable)

    def toJson(self) -> dict[str, typing.Any]:
        return {"type": "snr-range", "name": self.name, "nullable": self.nullable}

    @staticmethod
    def parse(text: str, name: str = "snr") -> list[float]:
        try:
            start, step, stop = (float(part) for part in text.split(":"))
        except ValueError:
            raise ConfigError(f"{name} '{text}' is not of the form start:step:stop")

        if step <= 0:
            raise ConfigError(f"{name} '{text}' needs a positive step")
        if stop < start:
            raise ConfigError(f"{name} '{text}' stops before it starts")

        count = int(round((stop - start) / step)) + 1
        if start + (count - 1) * step > stop + 1e-9:
            count -= 1
        # rounding keeps values like 0.1 steps printable
        return [round(start + i * step, 10) for i in range(count)]

    def validate(self, other: str | None) -> None:
        if self._checkNull(other):
            return
        if not isinstance(other, str):
            raise ConfigError(f"{self.name} is not a start:step:stop string")
        SnrRange.parse(other, self.name)


class DetectorToken(Rule):
    """Detector token such as `mmse:qr`, `gs:3` or `admin:5:2`."""

    def __init__(self, _name: str = "value", nullable: bool = False) -> None:
        super().__init__(_name=_name, nullable=nullable)

    def toJson(self) -> dict[str, typing.Any]:
        return {"type": "detector", "name": self.name, "nullable": self.nullable}

    def validate(self, other: str | None) -> None:
        from mimodet.detect import DetectorSpec

        if self._checkNull(other):
            return
        if not isinstance(other, str):
            raise ConfigError(f"{self.name} is not a detector token")
        try:
            DetectorSpec.fromToken(other)
        except ConfigError as e:
            raise ConfigError(f"{self.name}: {e.message}")


class Dictionary(Rule):
    """Validates dictionaries key by key.

    Args:
        rules (Dict[str, Rule]): Maps keys to validation rules for the corresponding values.
        _name (str): A name to go by when reporting errors.
        nullable (bool): Whether the dictionary value can be `None`.
        allow_unknown_keys (bool): Whether keys not covered by the rules are accepted.

    Raises:
        ConfigError: If the dictionary value is invalid.
    """

    def __init__(
        self,
        rules: dict[str, Rule] | None = None,
        _name: str = "value",
        nullable: bool = False,
        allow_unknown_keys: bool = False,
    ) -> None:
        super().__init__(_name=_name, nullable=nullable)
        self.rules = rules or {}
        self.allow_unknown_keys = allow_unknown_keys

    def toJson(self) -> dict[str, typing.Any]:
        return {
            "type": "dictionary",
            "rules": {key: rule.toJson() for key, rule in self.rules.items()},
            "name": self.name,
            "nullable": self.nullable,
            "allow_unknown_keys": self.allow_unknown_keys,
        }

    def validate(self, other: dict[str, typing.Any] | None) -> None:
        if self._checkNull(other):
            return
        if not isMap(other):
            raise ConfigError(f"{self.name} is not a dictionary")

        if not self.allow_unknown_keys:
            unknown_keys = set(other.keys()) - set(self.rules.keys())
            if unknown_keys:
                raise ConfigError(
                    f"{self.name} has unknown keys: {', '.join(sorted(unknown_keys))}"
                )

        for key, rule in self.rules.items():
            rule.name = key if self.name == "value" else f"{self.name}.{key}"
            rule.validate(other.get(key))


class List(Rule):
    """Validates a list and every element in it against `element_rule`.

    Examples:
        >>> List(Number(minimum=1), min_length=1).validate([4, 8])
        >>> List(Number(minimum=1), _name="u").validate([4, 0])
        ConfigError: u[1] is less than the minimum value of 1
    """

    def __init__(
        self,
        element_rule: Rule,
        _name: str = "value",
        nullable: bool = False,
        min_length: int | None = None,
        max_length: int | None = None,
    ) -> None:
        super().__init__(_name=_name, nullable=nullable)
        self.element_rule = element_rule
        self.min_length = min_length
        self.max_length = max_length

    def toJson(self) -> dict[str, typing.Any]:
        return {
            "type": "list",
            "element_rule": self.element_rule.toJson(),
            "name": self.name,
            "nullable": self.nullable,
            "min_length": self.min_length,
            "max_length": self.max_length,
        }

    def validate(self, other: list[typing.Any] | None) -> None:
        if self._checkNull(other):
            return
        if not isArray(other):
            raise ConfigError(f"{self.name} is not a list")

        if self.min_length is not None and len(other) < self.min_length:
            raise ConfigError(
                f"{self.name} has {len(other)} elements, which is less than the minimum of {self.min_length}"
            )
        if self.max_length is not None and len(other) > self.max_length:
            raise ConfigError(
                f"{self.name} has {len(other)} elements, which is more than the maximum of {self.max_length}"
            )

        for i, element in enumerate(other):
            self.element_rule.name = f"{self.name}[{i}]"
            self.element_rule.validate(element)
