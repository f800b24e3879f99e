"""Error classes for tuning."""

from ..errors import FinpotError


class TuningConfigError(FinpotError):
    """A fine-tuning configuration is invalid."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="TUNING_CONFIG_ERROR")


class TrainingInputError(FinpotError):
    """Training cannot start with the given inputs."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="TRAINING_INPUT_ERROR")


class TrainingError(FinpotError):
    """The trainer backend failed."""

    def __init__(self, message: str, diagnostics: str = "") -> None:
        super().__init__(message, code="TRAINING_ERROR")
        self.diagnostics = diagnostics


class CheckpointSelectionError(FinpotError):
    """No checkpoint can be selected."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="SELECTION_ERROR")
