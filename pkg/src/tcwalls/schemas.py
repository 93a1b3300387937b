"""JSON Schemas (draft 2020-12) for the structured outputs of the CLI."""

_INT = {"type": "integer"}
_NAT = {"type": "integer", "minimum": 0}
_FRACTION = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

ENUMERATE = {
    "type": "object",
    "required": ["class", "n", "k", "count"],
    "additionalProperties": False,
    "properties": {
        "class": {"enum": ["A", "B", "C", "H"]},
        "n": {"type": "integer", "minimum": 1},
        "k": _NAT,
        "count": _NAT,
        "words": {"type": "array", "items": {"type": "string"}},
    },
}

COUNT = {
    "type": "object",
    "required": ["model", "seq"],
    "properties": {
        "model": {"enum": ["paths", "tableaux", "series"]},
        "seq": {"enum": ["b", "c"]},
        "n": _NAT,
        "k": _NAT,
        "value": _NAT,
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "k", "value"],
                "properties": {"n": _NAT, "k": _NAT, "value": _NAT},
            },
        },
    },
}

TC = {
    "type": "object",
    "required": ["n", "k", "value"],
    "additionalProperties": False,
    "properties": {"n": _INT, "k": _NAT, "value": _NAT},
}

VERIFY = {
    "type": "object",
    "required": ["passed", "results"],
    "additionalProperties": False,
    "properties": {
        "passed": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["mode", "key", "passed", "detail"],
                "additionalProperties": False,
                "properties": {
                    "mode": {"enum": ["tableaux", "series"]},
                    "key": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}

TABLEAU = {
    "type": "object",
    "required": ["rows"],
    "additionalProperties": False,
    "properties": {
        "rows": {
            "type": "array",
            "minItems": 3,
            "maxItems": 3,
            "items": {"type": "array", "items": {"type": ["integer", "null"], "minimum": 1}},
        },
    },
}

SERIES = {
    "type": "object",
    "required": ["which", "order", "variable", "coefficients"],
    "additionalProperties": False,
    "properties": {
        "which": {"enum": ["D", "E", "B", "C"]},
        "k": {"type": ["integer", "null"]},
        "order": {"type": "integer", "minimum": 1},
        "variable": {"enum": ["z", "w"]},
        "coefficients": {"type": "array", "items": _FRACTION},
    },
}

DIST = {
    "type": "object",
    "required": ["param", "n", "total", "masses"],
    "additionalProperties": False,
    "properties": {
        "param": {"enum": ["X", "Y", "Z"]},
        "n": {"type": "integer", "minimum": 1},
        "total": {"type": "integer", "minimum": 1},
        "masses": {
            "type": "object",
            "propertyNames": {"pattern": r"^\d+$"},
            "additionalProperties": _FRACTION,
        },
    },
}

CONVERGENCE = {
    "type": "object",
    "required": ["param", "rows", "extras", "doubling"],
    "additionalProperties": False,
    "properties": {
        "param": {"enum": ["X", "Y", "Z"]},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "r", "moment", "target", "gap"],
                "properties": {
                    "n": _INT, "r": _INT, "moment": {"type": "number"},
                    "target": {"type": "number"}, "gap": {"type": "number", "minimum": 0},
                },
            },
        },
        "extras": {"type": "object"},
        "doubling": {"type": "object", "additionalProperties": {"type": "boolean"}},
    },
}

MANIFEST = {
    "type": "object",
    "required": ["tool", "version", "command", "inputs", "budgets", "exit_code", "seconds"],
    "properties": {
        "tool": {"const": "tcwalls"},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "budgets": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 1},
        },
        "exit_code": {"type": "integer"},
        "seconds": {"type": "number", "minimum": 0},
    },
}
