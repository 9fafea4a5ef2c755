"""URL routing for the msx application."""
from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .views import BindingViewSet, RunScriptView, VerificationRunViewSet, VerifyView, WorkspaceViewSet

router = DefaultRouter()
router.register(r"v1/sessions", WorkspaceViewSet, basename="sessions")
router.register(r"v1/bindings", BindingViewSet, basename="bindings")
router.register(r"v1/verification-runs", VerificationRunViewSet, basename="verification-runs")

urlpatterns = [
    path("", include(router.urls)),
    path("v1/run/", RunScriptView.as_view(), name="run-script"),
    path("v1/verify/", VerifyView.as_view(), name="verify"),
]
