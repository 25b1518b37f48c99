import math

from django.core.validators import FileExtensionValidator
from rest_framework import serializers

from surfaces.algebra import COEFF_NAMES


class QueryRecordSerializer(serializers.Serializer):
    """
    One input record: a quadric, an optional query point and an optional
    zero threshold. ``point`` is required when the serializer context has
    ``require_point=True``.
    """

    id = serializers.CharField(required=False, allow_blank=True)
    coeffs = serializers.DictField(child=serializers.FloatField())
    point = serializers.ListField(child=serializers.FloatField(), min_length=3, max_length=3, required=False)
    tol = serializers.FloatField(required=False)

    def validate_coeffs(self, value):
        missing = [name for name in COEFF_NAMES if name not in value]
        if missing:
            raise serializers.ValidationError(f"Missing coefficient(s): {', '.join(missing)}.")
        unknown = sorted(set(value) - set(COEFF_NAMES))
        if unknown:
            raise serializers.ValidationError(f"Unknown coefficient(s): {', '.join(unknown)}.")
        if not all(math.isfinite(value[name]) for name in COEFF_NAMES):
            raise serializers.ValidationError("Coefficients must be finite.")
        return {name: value[name] for name in COEFF_NAMES}

    def validate_point(self, value):
        if not all(math.isfinite(x) for x in value):
            raise serializers.ValidationError("Point coordinates must be finite.")
        return value

    def validate_tol(self, value):
        if not math.isfinite(value) or value <= 0:
            raise serializers.ValidationError("Tolerance must be a positive number.")
        return value

    def validate(self, attrs):
        if self.context.get('require_point') and 'point' not in attrs:
            raise serializers.ValidationError({'point': "A query point is required."})
        return attrs


class ErrorRecordSerializer(serializers.Serializer):
    id = serializers.CharField(allow_null=True)
    error = serializers.CharField()
    detail = serializers.CharField()


class _KindRenamingSerializer(serializers.Serializer):
    """Output records carry the surface type under the key ``class``."""

    id = serializers.CharField(allow_null=True)
    kind = serializers.CharField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        renamed = {'id': data.pop('id'), 'class': data.pop('kind')}
        renamed.update(data)
        return renamed


class ClassificationSerializer(_KindRenamingSerializer):
    J1 = serializers.FloatField()
    J2 = serializers.FloatField()
    J3 = serializers.FloatField()
    det_a = serializers.FloatField()
    a0 = serializers.FloatField()
    delta = serializers.FloatField()
    lambda12 = serializers.FloatField(allow_null=True)
    lambda3 = serializers.FloatField(allow_null=True)
    central = serializers.BooleanField()


class ProximitySerializer(_KindRenamingSerializer):
    pc = serializers.ListField(child=serializers.FloatField())
    v3 = serializers.ListField(child=serializers.FloatField())
    conic = serializers.CharField()
    n = serializers.FloatField(allow_null=True)
    e = serializers.FloatField(allow_null=True)
    pp = serializers.ListField(child=serializers.FloatField())
    t = serializers.ListField(child=serializers.FloatField())
    r = serializers.ListField(child=serializers.FloatField())
    footpoints3d = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()))
    r_min = serializers.FloatField()
    side = serializers.CharField()
    case = serializers.CharField()
    oracle = serializers.FloatField(required=False)
    oracle_gap = serializers.FloatField(required=False)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        # JSON has no infinity: line pairs report e = null
        if data['e'] is not None and not math.isfinite(data['e']):
            data['e'] = None
        return data


class BenchRowSerializer(serializers.Serializer):
    kind = serializers.CharField()
    cases = serializers.IntegerField()
    cycles = serializers.IntegerField()
    median_ns = serializers.FloatField()
    mean_ns = serializers.FloatField()
    std_ns = serializers.FloatField()


class BatchUploadSerializer(serializers.Serializer):
    """Serializer for batch file uploads"""

    file = serializers.FileField(
        validators=[FileExtensionValidator(allowed_extensions=['jsonl', 'ndjson', 'json', 'csv'])]
    )
    operation = serializers.ChoiceField(choices=['classify', 'proximity'], default='proximity')
    tol = serializers.FloatField(required=False)

    def validate_file(self, value):
        max_size = 10 * 1024 * 1024
        if value.size > max_size:
            raise serializers.ValidationError(
                f"File size cannot exceed {max_size / (1024 * 1024):.0f}MB. "
                f"Your file is {value.size / (1024 * 1024):.2f}MB."
            )
        return value

    def validate_tol(self, value):
        if not math.isfinite(value) or value <= 0:
            raise serializers.ValidationError("Tolerance must be a positive number.")
        return value
