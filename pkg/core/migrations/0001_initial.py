# Generated by Django 5.2.11 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(blank=True, max_length=200)),
                ('config_text', models.TextField()),
                ('mu_deg', models.FloatField()),
                ('dt_s', models.FloatField()),
                ('path_length_mm', models.FloatField()),
                ('total_time_s', models.FloatField()),
                ('robot_speed_mm_s', models.FloatField()),
                ('max_compression_mm', models.FloatField()),
                ('worst_slip_mm', models.FloatField()),
                ('worst_ape_percent', models.FloatField()),
                ('flagged', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
