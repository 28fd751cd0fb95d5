import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence, Type, TypeVar

from pydantic import BaseModel, ValidationError

from bapcore.exceptions import ExperimentIOException, InstanceFileException, create_validation_errors

ModelT = TypeVar("ModelT", bound=BaseModel)


def read_model(path: str | Path, model: Type[ModelT]) -> ModelT:
    """Parse a JSON file into a pydantic model; any failure names the file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFileException(str(path), e.strerror or str(e)) from e
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        exc = InstanceFileException(str(path), f"{e.error_count()} validation error(s)")
        exc.error_details.extend(
            create_validation_errors(
                {".".join(str(p) for p in err["loc"]) or "$": err["msg"] for err in e.errors()}
            )
        )
        raise exc from e


def write_json(path: str | Path, payload: BaseModel | dict[str, Any]) -> None:
    text = payload.model_dump_json(indent=2) if isinstance(payload, BaseModel) else json.dumps(payload, indent=2)
    try:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise ExperimentIOException(str(path), e.strerror or str(e)) from e


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    try:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise ExperimentIOException(str(path), e.strerror or str(e)) from e


def format_weight(value: float) -> str:
    """Whole weights without a trailing .0, others at full precision."""
    return str(int(value)) if float(value).is_integer() else repr(float(value))
