"""Page-number pagination for sessions, bindings and verification runs."""
from rest_framework.pagination import PageNumberPagination


class StandardResultsSetPagination(PageNumberPagination):
    page_size = 25
    page_size_query_param = "page_size"
    max_page_size = 100


class ReportPagination(StandardResultsSetPagination):
    """Verification runs embed whole law reports, so pages stay small."""

    page_size = 10
    max_page_size = 50
