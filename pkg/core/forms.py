"""
Forms validating one line of a simulation config file each.

Every line is read as `keyword [kind] key=value ...`; the key=value pairs
become the form data, so Django's field cleaning does the type conversion
and range checks.
"""
from django import forms
from django.core.exceptions import ValidationError

TRACK_CHOICES = [
    ('A', 'Track A'),
    ('B', 'Track B'),
    ('C', 'Track C'),
]


def positive(value):
    if value is not None and value <= 0:
        raise ValidationError('must be positive')


def non_negative(value):
    if value is not None and value < 0:
        raise ValidationError('must be non-negative')


class ConfigLineForm(forms.Form):
    """Base form; cleaned values of omitted optional fields are dropped"""

    def values(self):
        return {k: v for k, v in self.cleaned_data.items() if v is not None and v != ''}

    def describe_errors(self):
        return '; '.join(
            f'{field}: {" ".join(messages)}' for field, messages in self.errors.items()
        )


class PipeForm(ConfigLineForm):
    r_mm = forms.FloatField(validators=[positive])


class RobotForm(ConfigLineForm):
    Ds_mm = forms.FloatField(required=False, validators=[positive])
    LR_mm = forms.FloatField(required=False, validators=[positive])
    input_rpm = forms.FloatField(required=False, validators=[non_negative])
    tau_u_Nmm = forms.FloatField(required=False)
    k = forms.FloatField(required=False, validators=[positive])
    j = forms.FloatField(required=False, validators=[positive])
    inertia = forms.CharField(required=False)
    asym_YZ_mm = forms.FloatField(required=False, validators=[non_negative])
    asym_XZ_mm = forms.FloatField(required=False, validators=[positive])
    contact_mm = forms.FloatField(required=False, validators=[positive])
    pi = forms.FloatField(required=False, validators=[positive])

    def clean_inertia(self):
        raw = self.cleaned_data.get('inertia')
        if not raw:
            return None
        try:
            values = tuple(float(part) for part in raw.split(','))
        except ValueError:
            raise ValidationError('inertia must be six comma-separated numbers')
        if len(values) != 6:
            raise ValidationError('inertia must list exactly six side-gear inertias')
        if any(v < 0 for v in values):
            raise ValidationError('side-gear inertias must be non-negative')
        return values


class SpringForm(ConfigLineForm):
    preload_mm = forms.FloatField(required=False, validators=[non_negative])
    bend_extra_mm = forms.FloatField(required=False, validators=[non_negative])
    max_mm = forms.FloatField(required=False, validators=[non_negative])
    trigger = forms.FloatField(required=False, validators=[non_negative])

    def clean(self):
        cleaned = super().clean()
        preload = cleaned.get('preload_mm')
        extra = cleaned.get('bend_extra_mm')
        limit = cleaned.get('max_mm')
        if None not in (preload, extra, limit) and preload + extra > limit:
            raise ValidationError('preload + bend_extra must not exceed max compression')
        return cleaned


class StraightSegmentForm(ConfigLineForm):
    len_mm = forms.FloatField(validators=[positive])


class BendSegmentForm(ConfigLineForm):
    theta_deg = forms.FloatField(validators=[positive], max_value=360)
    R_mm = forms.FloatField(validators=[positive])
    roll_deg = forms.FloatField(required=False)


class SimForm(ConfigLineForm):
    mu_deg = forms.FloatField(required=False)
    dt_s = forms.FloatField(required=False, validators=[positive])
    stride = forms.IntegerField(required=False, min_value=1)


class FaultForm(ConfigLineForm):
    track = forms.ChoiceField(choices=TRACK_CHOICES)
    delta_mm_s = forms.FloatField()
    start_s = forms.FloatField(validators=[non_negative])
    end_s = forms.FloatField(validators=[non_negative])

    def clean(self):
        cleaned = super().clean()
        start = cleaned.get('start_s')
        end = cleaned.get('end_s')
        if start is not None and end is not None and end < start:
            raise ValidationError('fault window must end after it starts')
        return cleaned
