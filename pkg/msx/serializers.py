"""Serializers for the session, binding and verification API."""
from __future__ import annotations

from typing import Any, Dict

from rest_framework import serializers

from . import notation
from .config import ProjectConfig, config_from_dict, resolve_config
from .errors import ConfigError
from .export import FORMATS
from .models import BINDING_NAME_VALIDATOR, Binding, VerificationRun, Workspace
from .scripts import ScriptSerializer
from .verification import MUTANTS, SUITES


def session_config(workspace: Workspace | None) -> ProjectConfig:
    """The config a session was created with; sessions without one use the project default."""
    return resolve_config(data=workspace.config if workspace is not None else None)


class WorkspaceSerializer(serializers.ModelSerializer):
    binding_count = serializers.IntegerField(source="bindings.count", read_only=True)

    class Meta:
        model = Workspace
        fields = ["id", "name", "description", "config", "binding_count", "created_at", "updated_at"]
        read_only_fields = ["id", "created_at", "updated_at"]

    def validate_config(self, value: Dict[str, Any]) -> Dict[str, Any]:
        if not value:
            return {}
        try:
            return config_from_dict(value).data
        except ConfigError as exc:
            raise serializers.ValidationError(exc.details.get("errors", str(exc))) from exc


class BindingSerializer(serializers.ModelSerializer):
    session = serializers.SlugRelatedField(source="workspace", slug_field="name", queryset=Workspace.objects.all())
    input_kind = serializers.ChoiceField(choices=notation.KINDS, default="tree", write_only=True)
    text = serializers.CharField(required=False, allow_blank=False)
    payload = serializers.JSONField(required=False)

    class Meta:
        model = Binding
        fields = ["id", "session", "name", "kind", "input_kind", "text", "payload", "created_at", "updated_at"]
        read_only_fields = ["id", "kind", "created_at", "updated_at"]

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        input_kind = attrs.pop("input_kind", "tree")
        text = attrs.get("text")
        payload = attrs.get("payload")
        if text is None and payload is None:
            if self.partial:
                return attrs
            raise serializers.ValidationError({"text": "Provide the value as text or as a JSON payload."})
        workspace = attrs.get("workspace") or getattr(self.instance, "workspace", None)
        if payload is not None:
            value = notation.validate(notation.from_json(payload), input_kind)
        else:
            value = notation.parse(text, input_kind, session_config(workspace).inventory)
        attrs.update(
            kind=notation.kind_of(value),
            text=notation.format_value(value),
            payload=notation.to_json(value),
        )
        return attrs


class ParseSerializer(serializers.Serializer):
    text = serializers.CharField()
    kind = serializers.ChoiceField(choices=notation.KINDS, default="tree")
    session = serializers.SlugRelatedField(slug_field="name", queryset=Workspace.objects.all(), required=False)


class ExportQuerySerializer(serializers.Serializer):
    format = serializers.ChoiceField(choices=FORMATS, default="json")


class RunSerializer(serializers.Serializer):
    session = serializers.SlugRelatedField(slug_field="name", queryset=Workspace.objects.all())
    script = ScriptSerializer()
    target = serializers.CharField(required=False, allow_blank=True)
    bind = serializers.CharField(required=False, allow_blank=True, validators=[BINDING_NAME_VALIDATOR])

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:
        target = attrs.get("target")
        if target and not attrs["session"].bindings.filter(name=target).exists():
            raise serializers.ValidationError({"target": f"no binding named {target!r} in this session"})
        if not target and not attrs["script"].get("input"):
            raise serializers.ValidationError({"script": "the script needs an input when no target is given"})
        return attrs


class VerifyRequestSerializer(serializers.Serializer):
    suite = serializers.ChoiceField(choices=list(SUITES) + ["all"])
    seed = serializers.IntegerField(min_value=0, required=False)
    budget = serializers.IntegerField(min_value=1, required=False)
    mutant = serializers.ChoiceField(choices=MUTANTS, required=False, allow_null=True)
    session = serializers.SlugRelatedField(slug_field="name", queryset=Workspace.objects.all(), required=False)


class VerificationRunSerializer(serializers.ModelSerializer):
    session = serializers.SlugRelatedField(source="workspace", slug_field="name", read_only=True)

    class Meta:
        model = VerificationRun
        fields = ["id", "suite", "seed", "budget", "mutant", "passed", "report", "session", "created_at"]
        read_only_fields = fields
