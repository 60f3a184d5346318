"""JSON Schemas (draft 2020-12) for every document the CLI reads or writes."""

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_LABEL = {"type": "string", "pattern": r"^([A-F]|P([6-9]|[1-9]\d+))$"}

CONFIGURATION = {
    "type": "object",
    "required": ["n", "points"],
    "properties": {
        "schema": {"const": 1},
        "n": {"type": "integer", "minimum": 4},
        "points": {
            "type": "object",
            "propertyNames": _LABEL,
            "additionalProperties": {"type": "array", "items": _RATIONAL,
                                     "minItems": 3, "maxItems": 3},
        },
    },
}

IDENTITY = {
    "type": "object",
    "required": ["n", "terms"],
    "properties": {
        "schema": {"const": 1},
        "n": {"type": "integer", "minimum": 4},
        "degree": {"type": "integer", "minimum": 0},
        "provenance": {"type": "string"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeff", "factors"],
                "properties": {
                    "coeff": _RATIONAL,
                    "factors": {"type": "array",
                                "items": {"type": "array", "items": _LABEL,
                                          "minItems": 4, "maxItems": 4}},
                },
            },
        },
    },
}

IDENTITY_SET = {
    "type": "object",
    "required": ["schema", "space", "kernel_dim", "certified", "identities", "seeds"],
    "properties": {
        "schema": {"const": 1},
        "space": {
            "type": "object",
            "required": ["n", "degree", "profile"],
            "properties": {
                "n": {"type": "integer"},
                "degree": {"type": "integer"},
                "profile": {"oneOf": [{"enum": ["balanced", "unconstrained"]},
                                      {"type": "array", "items": {"type": "integer"}}]},
            },
        },
        "kernel_dim": {"type": "integer", "minimum": 0},
        "certified": {"enum": ["symbolic", "probabilistic"]},
        "identities": {"type": "array", "items": IDENTITY},
        "seeds": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
    },
}

ORBIT = {
    "type": "object",
    "required": ["schema", "size", "identities"],
    "properties": {
        "schema": {"const": 1},
        "size": {"type": "integer", "minimum": 1},
        "identities": {"type": "array", "items": IDENTITY},
    },
}

DIFFCHECK_REPORT = {
    "type": "object",
    "required": ["schema", "check", "samples", "pass"],
    "properties": {
        "schema": {"const": 1},
        "check": {"enum": ["eq2", "eq4", "eq5"]},
        "samples": {"type": "integer", "minimum": 1},
        "h": {"type": "number"},
        "fitted_constant": {"type": "number"},
        "max_rel_dev": {"type": "number"},
        "pass": {"type": "boolean"},
    },
}

ALL = {
    "configuration": CONFIGURATION,
    "identity": IDENTITY,
    "identity-set": IDENTITY_SET,
    "orbit": ORBIT,
    "diffcheck": DIFFCHECK_REPORT,
}
