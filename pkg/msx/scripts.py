"""Operation scripts: numbered steps applied to a workspace, tree, sum or assembly operator."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Union

from rest_framework import serializers

from . import dm, notation
from .config import ProjectConfig
from .errors import MsxError, ScriptError, StructureError
from .labels import Atom, FeatureBundle, bundle_of
from .morphology import coproduct_rho, fission_split, simplify_unary
from .operads import forget_morphology
from .sums import WorkspaceSum
from .syntax import coproduct, merge_all, merge_pair
from .trees import CopyCancellation, Forest, QuotientMode, Tree

logger = logging.getLogger(__name__)

Value = notation.Value


class StepSerializer(serializers.Serializer):
    op = serializers.CharField()

    def validate_op(self, value: str) -> str:
        if value not in OPERATIONS:
            raise serializers.ValidationError(f"unknown operation {value!r}")
        return value


class ScriptSerializer(serializers.Serializer):
    input = serializers.CharField(required=False, allow_blank=True)
    kind = serializers.ChoiceField(choices=notation.KINDS, default="tree")
    steps = serializers.ListField(child=serializers.DictField(), required=False, default=list)

    def validate_steps(self, value: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        errors = {}
        for index, step in enumerate(value, start=1):
            check = StepSerializer(data=step)
            if not check.is_valid():
                errors[str(index)] = check.errors
        if errors:
            raise serializers.ValidationError(errors)
        return value


@dataclass
class StepTrace:
    step: int
    op: str
    before: str
    after: str


@dataclass
class ScriptContext:
    config: ProjectConfig
    bindings: Mapping[str, Value] = field(default_factory=dict)

    def tree(self, ref: Any, kind: str = "tree") -> Tree:
        return self.value(ref, kind)

    def value(self, ref: Any, kind: str = "tree") -> Value:
        if isinstance(ref, str) and ref.startswith("@"):
            try:
                return self.bindings[ref[1:]]
            except KeyError:
                raise StructureError(f"no binding named {ref[1:]!r}", {"name": ref[1:]}) from None
        if isinstance(ref, dict):
            return notation.from_json(ref)
        return notation.parse(str(ref), kind, self.config.inventory)

    def bundle(self, items: Any) -> FeatureBundle:
        if isinstance(items, str):
            items = [part.strip() for part in items.split(",") if part.strip()]
        return bundle_of(items, self.config.inventory)


@dataclass
class ScriptResult:
    value: Value
    trace: List[StepTrace]

    def lines(self) -> List[str]:
        out = []
        for entry in self.trace:
            out.append(f"step {entry.step} {entry.op}")
            out.append(f"  before: {entry.before}")
            out.append(f"  after:  {entry.after}")
        return out


def site_of(raw: Any):
    """JSON site: a list of ints (VertexId), an atom name, or a pair of atom names (a cherry)."""
    if isinstance(raw, str):
        return raw
    if isinstance(raw, list) and len(raw) == 2 and all(isinstance(x, str) for x in raw):
        return (raw[0], raw[1])
    if isinstance(raw, list) and all(isinstance(x, int) for x in raw):
        return tuple(raw)
    raise StructureError(f"cannot read site {raw!r}")


def _as_sum(value: Value) -> WorkspaceSum:
    if isinstance(value, WorkspaceSum):
        return value
    if isinstance(value, dm.AssemblyOp):
        raise StructureError("render the assembly operator before rewriting it")
    return WorkspaceSum.single(value)


def _as_forest(value: Value) -> Forest:
    if isinstance(value, Forest):
        return value
    if isinstance(value, Tree):
        return Forest.of(value)
    raise StructureError(f"operation needs a workspace, got a {notation.kind_of(value)}")


def _on_trees(value: Value, fn: Callable[[Tree], WorkspaceSum]) -> WorkspaceSum:
    """Apply a tree rewrite to every single-tree term of the current value."""

    def expand(key):
        factor = key[0]
        if len(key) != 1 or len(factor) != 1:
            raise StructureError("rewrites apply to sums of single morphosyntactic trees")
        return fn(factor[0])

    return _as_sum(value).map_terms(expand)


def _fission_parts(step: Dict[str, Any], ctx: ScriptContext):
    parts = step.get("parts") or []
    if len(parts) != 2:
        raise StructureError("fission needs two parts")
    return site_of(step["site"]), ctx.bundle(step.get("shared", [])), (ctx.bundle(parts[0]), ctx.bundle(parts[1]))


def _fission_spec(step: Dict[str, Any], ctx: ScriptContext) -> dm.FissionSpec:
    return dm.FissionSpec(*_fission_parts(step, ctx), Atom(step["partner"]))


def _fuse(value, step, ctx):
    return _on_trees(value, lambda t: WorkspaceSum.single(dm.fusion_at(t, site_of(step["site"]), ctx.config.gamma_sm)))


def _fusion_all(value, step, ctx):
    return _on_trees(value, lambda t: dm.fusion_all(t, ctx.config.gamma_sm))


def _fission(value, step, ctx):
    if step.get("partner"):
        spec = _fission_spec(step, ctx)
        return _on_trees(value, lambda t: dm.fission(t, spec, ctx.config.gamma_sm))
    site, shared, parts = _fission_parts(step, ctx)
    partners = ctx.config.partner_candidates(*(part | shared for part in parts))
    return _on_trees(value, lambda t: dm.fission_over_partners(t, site, shared, parts, partners, ctx.config.gamma_sm))


def _fusion_workspace(value, step, ctx):
    return dm.fusion_workspace(_as_forest(value), ctx.config.gamma_sm)


def _obliterate(value, step, ctx):
    return _on_trees(value, lambda t: WorkspaceSum.single(dm.obliterate(t, site_of(step["site"]))))


def _impoverish(value, step, ctx):
    gen = dm.Impoverish(site_of(step["site"]), ctx.bundle(step["removed"]), bool(step.get("trace", False)))
    return _on_trees(value, lambda t: dm.apply_generator(gen, t, ctx.config.gamma_sm, ctx.config.unmarked_feature))


def _coproduct(value, step, ctx):
    mode = QuotientMode(step.get("mode", QuotientMode.D.value))
    cancellation = CopyCancellation(step.get("copy_cancellation", ctx.config.copy_cancellation.value))
    return coproduct(_as_forest(value), mode, cancellation)


def _coproduct_rho(value, step, ctx):
    return coproduct_rho(_as_forest(value))


def _merge(value, step, ctx):
    first = ctx.tree(step["first"], "so")
    second = ctx.tree(step["second"], "so") if step.get("second") is not None else None
    return merge_pair(_as_forest(value), first, second, ctx.config.copy_cancellation)


def _merge_all(value, step, ctx):
    return merge_all(_as_forest(value), ctx.config.copy_cancellation)


def _assemble(value, step, ctx):
    op = ctx.value(step["operator"], "assembly")
    return dm.assemble_MT(op, _as_forest(value), ctx.config.gamma_sm)


def _assemble_kt(value, step, ctx):
    return dm.assemble_KT(ctx.tree(step["skeleton"], "so"), _as_forest(value), ctx.config.gamma_sm)


def _render(value, step, ctx):
    if not isinstance(value, dm.AssemblyOp):
        raise StructureError("render needs an assembly operator")
    return value.render(ctx.config.gamma_sm)


def _decompose(value, step, ctx):
    if not isinstance(value, Tree):
        raise StructureError("decompose needs a morphosyntactic tree")
    return dm.AssemblyOp.from_tree(value)


def _forget(value, step, ctx):
    return _on_trees(value, lambda t: WorkspaceSum.single(forget_morphology(t, bool(step.get("keep_heads")))))


def _fission_split(value, step, ctx):
    if not isinstance(value, Tree):
        raise StructureError("fission_split needs a morphological tree")
    return fission_split(value, ctx.bundle(step["target"]), bool(step.get("simplify", True)))


def _simplify(value, step, ctx):
    if not isinstance(value, Tree):
        raise StructureError("simplify needs a morphological tree")
    return simplify_unary(value)


def _collapse(value, step, ctx):
    return _as_sum(value).collapse()


OPERATIONS: Dict[str, Callable[[Value, Dict[str, Any], ScriptContext], Value]] = {
    "fuse": _fuse,
    "fusion_all": _fusion_all,
    "fusion_workspace": _fusion_workspace,
    "fission": _fission,
    "obliterate": _obliterate,
    "impoverish": _impoverish,
    "coproduct": _coproduct,
    "coproduct_rho": _coproduct_rho,
    "merge": _merge,
    "merge_all": _merge_all,
    "assemble": _assemble,
    "assemble_kt": _assemble_kt,
    "render": _render,
    "decompose": _decompose,
    "forget": _forget,
    "fission_split": _fission_split,
    "simplify": _simplify,
    "collapse": _collapse,
}


def validate_script(data: Dict[str, Any]) -> Dict[str, Any]:
    serializer = ScriptSerializer(data=data)
    if not serializer.is_valid():
        raise StructureError("invalid operation script", {"errors": serializer.errors})
    return serializer.validated_data


def load_script(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StructureError(f"cannot read script {path}: {exc.strerror}", {"path": str(path)}) from exc
    except json.JSONDecodeError as exc:
        raise StructureError(f"script {path} is not valid JSON: {exc.msg}", {"path": str(path)}) from exc
    return validate_script(data)


def run_script(
    script: Dict[str, Any],
    ctx: ScriptContext,
    value: Optional[Value] = None,
) -> ScriptResult:
    """Run every step in order; an engine error is re-raised as ScriptError naming the step."""
    script = validate_script(script)
    if value is None:
        if not script.get("input"):
            raise StructureError("the script has no input and no target was given")
        value = ctx.value(script["input"], script["kind"])
    trace: List[StepTrace] = []
    for index, step in enumerate(script["steps"], start=1):
        handler = OPERATIONS[step["op"]]
        before = notation.format_value(value)
        try:
            value = handler(value, step, ctx)
        except (MsxError, KeyError, ValueError) as exc:
            if isinstance(exc, KeyError):
                exc = StructureError(f"missing field {exc.args[0]!r}")
            raise ScriptError(index, exc) from exc
        trace.append(StepTrace(index, step["op"], before, notation.format_value(value)))
        logger.info("script step %d (%s) done", index, step["op"])
    return ScriptResult(value, trace)
