from django.urls import path

from .views import BatchUploadView, ClassifyView, CorpusView, ProximityView

urlpatterns = [
    path('classify/', ClassifyView.as_view(), name='classify'),
    path('proximity/', ProximityView.as_view(), name='proximity'),
    path('batch/', BatchUploadView.as_view(), name='batch'),
    path('corpus/', CorpusView.as_view(), name='corpus'),
]
