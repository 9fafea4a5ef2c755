"""Project configuration: inventories, the Γ_SM table and verification budgets."""
from __future__ import annotations

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from django.conf import settings
from rest_framework import serializers

from .errors import ConfigError, InventoryError
from .labels import Atom, Feature, FeatureBundle, Inventory, Valuation, bundle_of
from .operads import GammaSM
from .trees import CopyCancellation

logger = logging.getLogger(__name__)

VALUATION_CHOICES = [v.value for v in Valuation]


class GammaPairSerializer(serializers.Serializer):
    bundle = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    atom = serializers.CharField()


class GammaSerializer(serializers.Serializer):
    pairs = GammaPairSerializer(many=True, required=False)
    surjective = serializers.BooleanField(default=False)


class VerifySerializer(serializers.Serializer):
    seed = serializers.IntegerField(min_value=0, default=0)
    budget = serializers.IntegerField(min_value=1, default=1000)
    hopf_leaves = serializers.IntegerField(min_value=1, max_value=8, default=4)
    comodule_leaves = serializers.IntegerField(min_value=1, max_value=8, default=4)
    operad_leaves = serializers.IntegerField(min_value=1, max_value=8, default=5)
    assembly_leaves = serializers.IntegerField(min_value=1, max_value=6, default=3)
    merge_leaves = serializers.IntegerField(min_value=1, max_value=4, default=2)


class ProjectConfigSerializer(serializers.Serializer):
    so_inventory = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    mo_inventory = serializers.DictField(
        child=serializers.ListField(child=serializers.ChoiceField(choices=VALUATION_CHOICES, allow_blank=True)),
        required=False,
        default=dict,
    )
    gamma_sm = GammaSerializer(required=False)
    fission_atom_candidates = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    copy_cancellation = serializers.ChoiceField(
        choices=[c.value for c in CopyCancellation],
        default=CopyCancellation.CANONICAL.value,
    )
    unmarked_feature = serializers.CharField(required=False, allow_null=True, allow_blank=True, default=None)
    verify = VerifySerializer(required=False)

    def validate_so_inventory(self, value):
        duplicates = sorted({atom for atom in value if value.count(atom) > 1})
        if duplicates:
            raise serializers.ValidationError(f"duplicate atoms: {', '.join(duplicates)}")
        return value

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        inventory = _inventory(attrs)
        gamma = attrs.get("gamma_sm") or {}
        errors: Dict[str, Any] = {}
        pair_errors = []
        for index, pair in enumerate(gamma.get("pairs", [])):
            try:
                bundle_of(pair["bundle"], inventory)
                inventory.parse_atom(pair["atom"])
            except InventoryError as exc:
                pair_errors.append(f"pair {index}: {exc}")
        if pair_errors:
            errors["gamma_sm"] = pair_errors
        if gamma.get("surjective") and attrs.get("so_inventory"):
            covered = {pair["atom"] for pair in gamma.get("pairs", [])}
            missing = sorted(set(attrs["so_inventory"]) - covered)
            if missing:
                errors.setdefault("gamma_sm", []).append(f"surjectivity: no pair for {', '.join(missing)}")
        unknown = [name for name in attrs.get("fission_atom_candidates", []) if not _known_atom(inventory, name)]
        if unknown:
            errors["fission_atom_candidates"] = [f"unknown atoms: {', '.join(unknown)}"]
        if attrs.get("unmarked_feature"):
            try:
                inventory.parse_feature(attrs["unmarked_feature"])
            except InventoryError as exc:
                errors["unmarked_feature"] = [str(exc)]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


def _inventory(attrs: Dict[str, Any]) -> Inventory:
    categories = {
        category: frozenset(Valuation(v) for v in valuations)
        for category, valuations in (attrs.get("mo_inventory") or {}).items()
    }
    return Inventory(frozenset(attrs.get("so_inventory") or ()), categories)


def _known_atom(inventory: Inventory, name: str) -> bool:
    return not inventory.atoms or name in inventory.atoms


@dataclass(frozen=True)
class VerifySettings:
    seed: int = 0
    budget: int = 1000
    hopf_leaves: int = 4
    comodule_leaves: int = 4
    operad_leaves: int = 5
    assembly_leaves: int = 3
    merge_leaves: int = 2


@dataclass(frozen=True)
class ProjectConfig:
    inventory: Inventory = field(default_factory=Inventory.open)
    gamma_sm: GammaSM = field(default_factory=GammaSM)
    fission_atom_candidates: Tuple[Atom, ...] = ()
    copy_cancellation: CopyCancellation = CopyCancellation.CANONICAL
    unmarked_feature: Optional[Feature] = None
    verify: VerifySettings = field(default_factory=VerifySettings)
    data: Dict[str, Any] = field(default_factory=dict, compare=False)

    def partner_candidates(self, *bundles: FeatureBundle) -> Tuple[Atom, ...]:
        """Atoms tried as fission partners for the pieces: configured, else those Γ_SM pairs with any piece."""
        if self.fission_atom_candidates:
            return self.fission_atom_candidates
        return tuple(sorted({atom for bundle in bundles for atom in self.gamma_sm.atoms_for(bundle)}))


def config_from_dict(data: Dict[str, Any]) -> ProjectConfig:
    serializer = ProjectConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError("invalid project configuration", {"errors": serializer.errors})
    attrs = serializer.validated_data
    inventory = _inventory(attrs)
    gamma = attrs.get("gamma_sm") or {}
    gamma_sm = GammaSM.of(
        ((bundle_of(pair["bundle"], inventory), Atom(pair["atom"])) for pair in gamma.get("pairs", [])),
        surjectivity_required=gamma.get("surjective", False),
    )
    unmarked = attrs.get("unmarked_feature")
    config = ProjectConfig(
        inventory=inventory,
        gamma_sm=gamma_sm,
        fission_atom_candidates=tuple(Atom(name) for name in attrs.get("fission_atom_candidates", [])),
        copy_cancellation=CopyCancellation(attrs["copy_cancellation"]),
        unmarked_feature=inventory.parse_feature(unmarked) if unmarked else None,
        verify=VerifySettings(**(attrs.get("verify") or {})),
        data=json.loads(json.dumps(attrs)),
    )
    logger.debug(
        "loaded config: %d atoms, %d categories, %d gamma pairs",
        len(inventory.atoms),
        len(inventory.categories),
        len(gamma_sm.pairs),
    )
    return config


def load_config(path: Union[str, Path]) -> ProjectConfig:
    """Read a JSON or TOML project config; the format follows the file suffix."""
    source = Path(path)
    try:
        raw = source.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc.strerror}", {"path": str(source)}) from exc
    try:
        if source.suffix == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        else:
            data = json.loads(raw)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config {source}: {exc}", {"path": str(source)}) from exc
    logger.info("using project config %s", source)
    return config_from_dict(data)


def default_config() -> ProjectConfig:
    """The config named by the MSX_CONFIG setting, or an open configuration."""
    path = getattr(settings, "MSX_CONFIG", "")
    if path:
        return load_config(path)
    return config_from_dict({"verify": {"seed": getattr(settings, "MSX_SEED", 0)}})


def resolve_config(path: Optional[str] = None, data: Optional[Dict[str, Any]] = None) -> ProjectConfig:
    if data:
        return config_from_dict(data)
    if path:
        return load_config(path)
    return default_config()
