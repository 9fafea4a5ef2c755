"""REST API views for sessions, bindings, scripts and verification runs."""
from __future__ import annotations

import logging
from typing import Any

from django.http import HttpResponse
from rest_framework import mixins, permissions, status, viewsets
from rest_framework.decorators import action
from rest_framework.request import Request
from rest_framework.response import Response
from rest_framework.views import APIView

from . import filters, notation
from .export import export
from .models import Binding, VerificationRun, Workspace
from .pagination import ReportPagination
from .scripts import ScriptContext, run_script
from .serializers import (
    BindingSerializer,
    ExportQuerySerializer,
    ParseSerializer,
    RunSerializer,
    VerificationRunSerializer,
    VerifyRequestSerializer,
    WorkspaceSerializer,
    session_config,
)
from .verification import SUITES, run_suite

logger = logging.getLogger(__name__)

CONTENT_TYPES = {"dot": "text/vnd.graphviz", "json": "application/json", "text": "text/plain"}


class WorkspaceViewSet(viewsets.ModelViewSet):
    queryset = Workspace.objects.all()
    serializer_class = WorkspaceSerializer
    lookup_field = "name"
    permission_classes = [permissions.AllowAny]


class BindingViewSet(viewsets.ModelViewSet):
    queryset = Binding.objects.select_related("workspace")
    serializer_class = BindingSerializer
    filterset_class = filters.BindingFilter
    permission_classes = [permissions.AllowAny]

    @action(detail=True, methods=["get"], url_path="export")
    def export_binding(self, request: Request, pk: str) -> HttpResponse:
        binding = self.get_object()
        query = ExportQuerySerializer(data={"format": request.query_params.get("format", "json")})
        query.is_valid(raise_exception=True)
        fmt = query.validated_data["format"]
        return HttpResponse(export(binding.value, fmt), content_type=CONTENT_TYPES[fmt])

    @action(detail=False, methods=["post"], url_path="parse")
    def parse(self, request: Request) -> Response:
        serializer = ParseSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        config = session_config(data.get("session"))
        value = notation.parse(data["text"], data["kind"], config.inventory)
        payload = {
            "kind": notation.kind_of(value),
            "text": notation.format_value(value),
            "payload": notation.to_json(value),
        }
        return Response(payload)


class VerificationRunViewSet(mixins.ListModelMixin, mixins.RetrieveModelMixin, viewsets.GenericViewSet):
    queryset = VerificationRun.objects.select_related("workspace")
    serializer_class = VerificationRunSerializer
    pagination_class = ReportPagination
    filterset_class = filters.VerificationRunFilter
    permission_classes = [permissions.AllowAny]


class RunScriptView(APIView):
    """Run an operation script against a session, optionally binding the result."""

    permission_classes = [permissions.AllowAny]

    def post(self, request: Request, *args: Any, **kwargs: Any) -> Response:
        serializer = RunSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        workspace = serializer.validated_data["session"]
        ctx = ScriptContext(session_config(workspace), workspace.values())
        target = serializer.validated_data.get("target")
        value = ctx.bindings[target] if target else None
        result = run_script(serializer.validated_data["script"], ctx, value)
        bind = serializer.validated_data.get("bind")
        if bind:
            Binding.store(workspace, bind, result.value)
            logger.info("bound script result to %s:%s", workspace.name, bind)
        payload = {
            "kind": notation.kind_of(result.value),
            "text": notation.format_value(result.value),
            "payload": notation.to_json(result.value),
            "trace": [vars(entry) for entry in result.trace],
            "bound": bind or None,
        }
        return Response(payload, status=status.HTTP_201_CREATED if bind else status.HTTP_200_OK)


class VerifyView(APIView):
    """Run one or all verification suites and persist each report."""

    permission_classes = [permissions.AllowAny]

    def post(self, request: Request, *args: Any, **kwargs: Any) -> Response:
        serializer = VerifyRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        workspace = data.get("session")
        config = session_config(workspace)
        names = list(SUITES) if data["suite"] == "all" else [data["suite"]]
        runs = []
        for name in names:
            report = run_suite(name, config, seed=data.get("seed"), budget=data.get("budget"), mutant=data.get("mutant"))
            runs.append(VerificationRun.record(report, workspace))
        payload = {
            "passed": all(run.passed for run in runs),
            "runs": VerificationRunSerializer(runs, many=True).data,
        }
        return Response(payload, status=status.HTTP_201_CREATED)
