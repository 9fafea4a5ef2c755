"""Domain errors raised by the morphosyntax engine."""
from __future__ import annotations

from typing import Any, Dict, Optional


class MsxError(Exception):
    """Base class for every engine error; carries a machine code and details."""

    code = "msx_error"

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message or self.code)
        self.details: Dict[str, Any] = details or {}


# tree surgery


class TreeError(MsxError):
    code = "tree_error"


class OverlapError(TreeError):
    code = "overlap"


class RootMixError(TreeError):
    code = "root_mix"


class ArityError(TreeError):
    code = "arity"


class EmptyForestError(TreeError):
    code = "empty_forest"


class LeafCutError(TreeError):
    code = "leaf_cut"


class InvalidVertexError(TreeError):
    code = "invalid_vertex"


# notation and validation


class NotationError(MsxError):
    code = "notation"


class NotationSyntaxError(NotationError):
    code = "syntax"


class StructureError(NotationError):
    """A value parsed but is not a valid object of the requested kind."""

    code = "validation"


class InventoryError(MsxError):
    code = "inventory"


class UnknownFeatureError(InventoryError):
    code = "unknown_feature"


class ConfigError(MsxError):
    code = "config"


# syntax


class SyntaxEngineError(MsxError):
    code = "syntax_engine"


class NotASuccessorError(SyntaxEngineError):
    code = "not_a_successor"


class PartialHeadError(SyntaxEngineError):
    code = "partial_head"


# operads


class OperadError(MsxError):
    code = "operad"


class ArityMismatchError(OperadError):
    code = "arity_mismatch"


class HoleIndexError(OperadError, IndexError):
    code = "hole_index"


class ColorMismatchError(OperadError):
    code = "color_mismatch"


class MatchError(OperadError):
    """Raised when a bundle/atom pair at a skeleton leaf is outside Gamma_SM."""

    code = "match"

    def __init__(self, leaf: int, bundle: Any, atom: Any) -> None:
        super().__init__(
            f"leaf {leaf}: ({bundle}, {atom}) is not an admissible pair",
            {"leaf": leaf, "bundle": str(bundle), "atom": str(atom)},
        )
        self.leaf = leaf
        self.bundle = bundle
        self.atom = atom


# assembly


class AssemblyError(MsxError):
    code = "assembly"


# distributed morphology


class DMError(MsxError):
    code = "dm"


class NotACherryError(DMError):
    code = "not_a_cherry"


class GammaError(DMError):
    code = "gamma"


class NoHeadError(DMError):
    code = "no_head"


class EmptySplitError(DMError):
    code = "empty_split"


class PartitionError(DMError):
    code = "partition"


class NoInsertionError(DMError):
    code = "no_insertion"


class NotSubsetError(DMError):
    code = "not_subset"


class ScriptError(MsxError):
    """Wraps an engine error raised while executing a numbered script step."""

    code = "script"

    def __init__(self, step: int, cause: Exception) -> None:
        details = {"step": step, "cause": getattr(cause, "code", type(cause).__name__)}
        details.update(getattr(cause, "details", {}) or {})
        super().__init__(f"step {step}: {cause}", details)
        self.step = step
        self.cause = cause
