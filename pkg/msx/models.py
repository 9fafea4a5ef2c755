"""Database models for stored sessions, bindings and verification runs."""
from __future__ import annotations

from django.core.validators import RegexValidator
from django.db import models

from . import notation

BINDING_NAME_VALIDATOR = RegexValidator(r"^[A-Za-z_][A-Za-z0-9_-]{0,63}$", "Enter a valid binding name.")

VALUE_KINDS = [("tree", "Tree"), ("forest", "Workspace"), ("sum", "Sum"), ("assembly", "Assembly operator")]


class TimeStampedModel(models.Model):
    """Abstract base class for created/updated timestamps."""

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        abstract = True


class Workspace(TimeStampedModel):
    """A named session holding bindings and the config they were validated against."""

    name = models.CharField(max_length=64, unique=True, validators=[BINDING_NAME_VALIDATOR])
    description = models.TextField(blank=True)
    config = models.JSONField(default=dict, blank=True)

    class Meta:
        ordering = ["name"]

    def __str__(self) -> str:  # pragma: no cover - human readable
        return self.name

    def values(self) -> dict:
        """Every binding decoded to its engine value, keyed by name."""
        return {binding.name: binding.value for binding in self.bindings.all()}


class Binding(TimeStampedModel):
    """One named value inside a session, stored as canonical text plus JSON."""

    workspace = models.ForeignKey(Workspace, on_delete=models.CASCADE, related_name="bindings")
    name = models.CharField(max_length=64, validators=[BINDING_NAME_VALIDATOR])
    kind = models.CharField(max_length=16, choices=VALUE_KINDS)
    text = models.TextField()
    payload = models.JSONField(default=dict)

    class Meta:
        unique_together = ("workspace", "name")
        ordering = ["workspace", "name"]

    def __str__(self) -> str:  # pragma: no cover - human readable
        return f"{self.workspace.name}:{self.name}"

    @property
    def value(self):
        return notation.from_json(self.payload)

    @classmethod
    def store(cls, workspace: Workspace, name: str, value) -> "Binding":
        binding, _ = cls.objects.update_or_create(
            workspace=workspace,
            name=name,
            defaults={
                "kind": notation.kind_of(value),
                "text": notation.format_value(value),
                "payload": notation.to_json(value),
            },
        )
        return binding


class VerificationRun(TimeStampedModel):
    """Outcome of one verification suite, with the seed needed to reproduce it."""

    suite = models.CharField(max_length=32)
    seed = models.IntegerField(default=0)
    budget = models.PositiveIntegerField(default=0)
    mutant = models.CharField(max_length=32, blank=True)
    passed = models.BooleanField(default=False)
    report = models.JSONField(default=dict, blank=True)
    workspace = models.ForeignKey(
        Workspace,
        on_delete=models.SET_NULL,
        null=True,
        blank=True,
        related_name="verification_runs",
    )

    class Meta:
        ordering = ["-created_at"]

    def __str__(self) -> str:  # pragma: no cover - human readable
        return f"{self.suite} ({'pass' if self.passed else 'fail'})"

    @classmethod
    def record(cls, report, workspace: Workspace | None = None) -> "VerificationRun":
        return cls.objects.create(
            suite=report.suite,
            seed=report.seed,
            budget=report.budget,
            mutant=report.mutant or "",
            passed=report.passed,
            report=report.as_dict(),
            workspace=workspace,
        )
