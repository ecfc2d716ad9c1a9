"""Request and response models for the HTTP service.

Scalars travel as strings in the syntax of the selected ring
(`DivisionContext.parse` / `render`); lists of scalars are JSON
arrays.  Basis strings are arrays of subsets, each subset an array of
integers.  Every endpoint wraps its payload in the common envelope:
``{"ok": true, "result": {...}}`` on success, ``{"ok": false,
"error": {"kind", "message", ...}}`` on failure.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

MAX_GROUND_SET = 16

Ring = str  # "rat" | "quat" | "ratfunc" | "mat<m>"


class NormalizeRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    expr: str


class EqualRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    left: str
    right: str


class SymfunRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    k: int = Field(ge=0)
    subset: list[int]
    method: Literal["recursion", "closed_form"] = "recursion"


class SpecializeRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    expr: str
    map: Literal["phi", "psi"]


class EvaluateRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    expr: str
    ring: Ring = "quat"
    roots: Optional[list[str]] = None
    seed: int = 0


class EnumerateBasisRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_GROUND_SET)
    max_degree: int = Field(ge=0)
    variant: Literal["reduced", "standard"] = "reduced"


class FactorRootsRequest(BaseModel):
    ring: Ring = "quat"
    roots: Optional[list[str]] = None
    n: Optional[int] = Field(default=None, ge=1)
    a0: Optional[str] = None
    seed: int = 0


class VietaRequest(BaseModel):
    ring: Ring = "quat"
    roots: Optional[list[str]] = None
    n: Optional[int] = Field(default=None, ge=1)
    ordering: Optional[list[int]] = None
    seed: int = 0


class VerifyRelationsRequest(BaseModel):
    target: Literal["qn", "roots", "diff"] = "qn"
    n: Optional[int] = Field(default=None, ge=1)
    ring: Ring = "quat"
    roots: Optional[list[str]] = None
    fs: Optional[list[str]] = None
    seed: int = 0


class DiffFactorRequest(BaseModel):
    ring: Ring = "mat2"
    fs: Optional[list[str]] = None
    n: Optional[int] = Field(default=None, ge=1)
    seed: int = 0


class MiuraRequest(BaseModel):
    ring: Ring = "ratfunc"
    flag: list[str]


class CheckRSRequest(BaseModel):
    n: int = Field(ge=1, le=3)


class ErrorBody(BaseModel):
    kind: Literal["parse", "usage", "resource", "genericity", "internal"]
    message: str
    position: Optional[int] = None
    expected: Optional[list[str]] = None


class Envelope(BaseModel):
    ok: bool
    result: Optional[dict] = None
    error: Optional[ErrorBody] = None
