"""Filter classes for API endpoints."""
from __future__ import annotations

import django_filters

from .models import Binding, VerificationRun


class BindingFilter(django_filters.FilterSet):
    session = django_filters.CharFilter(field_name="workspace__name", lookup_expr="iexact")
    kind = django_filters.CharFilter(field_name="kind", lookup_expr="iexact")
    name = django_filters.CharFilter(field_name="name", lookup_expr="icontains")

    class Meta:
        model = Binding
        fields = ["session", "kind", "name"]


class VerificationRunFilter(django_filters.FilterSet):
    suite = django_filters.CharFilter(field_name="suite", lookup_expr="iexact")
    passed = django_filters.BooleanFilter(field_name="passed")
    session = django_filters.CharFilter(field_name="workspace__name", lookup_expr="iexact")

    class Meta:
        model = VerificationRun
        fields = ["suite", "passed", "session"]
