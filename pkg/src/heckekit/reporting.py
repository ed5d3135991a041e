"""Report envelope validation against the shipped schema.

The validator covers the handful of JSON Schema keywords the shipped
schema actually uses (type, enum, required, properties,
additionalProperties, items), which keeps the package free of
dependencies while still giving golden-file tests a real check.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List

__all__ = ["load_report_schema", "validate_json", "validate_report"]

_SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "schemas", "report.schema.json")

_TYPES = {
    "object": dict,
    "array": list,
    "string": str,
    "boolean": bool,
    "null": type(None),
}


def load_report_schema() -> Dict[str, Any]:
    with open(_SCHEMA_PATH, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _type_ok(value: Any, name: str) -> bool:
    if name == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if name == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    expected = _TYPES.get(name)
    if expected is None:
        raise ValueError("unsupported schema type %r" % name)
    if expected is dict:
        return isinstance(value, dict)
    if expected is list:
        return isinstance(value, list)
    # bool is an int subclass; demand the exact type for the others.
    return type(value) is expected or (name == "string" and isinstance(value, str))


def validate_json(instance: Any, schema: Dict[str, Any], path: str = "$") -> List[str]:
    """Collect every violation; an empty list means the instance conforms."""
    errors: List[str] = []
    if "type" in schema:
        names = schema["type"] if isinstance(schema["type"], list) else [schema["type"]]
        if not any(_type_ok(instance, n) for n in names):
            errors.append("%s: expected type %s" % (path, "/".join(names)))
            return errors
    if "enum" in schema and instance not in schema["enum"]:
        errors.append("%s: %r not in enum %s" % (path, instance, schema["enum"]))
    if isinstance(instance, dict):
        for key in schema.get("required", ()):
            if key not in instance:
                errors.append("%s: missing required key %r" % (path, key))
        props = schema.get("properties", {})
        for key, sub in props.items():
            if key in instance:
                errors.extend(validate_json(instance[key], sub, "%s.%s" % (path, key)))
        if schema.get("additionalProperties") is False:
            for key in instance:
                if key not in props:
                    errors.append("%s: unexpected key %r" % (path, key))
    if isinstance(instance, list) and "items" in schema:
        for i, item in enumerate(instance):
            errors.extend(validate_json(item, schema["items"], "%s[%d]" % (path, i)))
    return errors


def validate_report(report: Dict[str, Any]) -> List[str]:
    return validate_json(report, load_report_schema())
