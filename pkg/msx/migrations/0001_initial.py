# Generated by Django 4.2.24 on 2026-10-19 16:02

import django.core.validators
from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='Workspace',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('name', models.CharField(max_length=64, unique=True, validators=[django.core.validators.RegexValidator('^[A-Za-z_][A-Za-z0-9_-]{0,63}$', 'Enter a valid binding name.')])),
                ('description', models.TextField(blank=True)),
                ('config', models.JSONField(blank=True, default=dict)),
            ],
            options={
                'ordering': ['name'],
            },
        ),
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('suite', models.CharField(max_length=32)),
                ('seed', models.IntegerField(default=0)),
                ('budget', models.PositiveIntegerField(default=0)),
                ('mutant', models.CharField(blank=True, max_length=32)),
                ('passed', models.BooleanField(default=False)),
                ('report', models.JSONField(blank=True, default=dict)),
                ('workspace', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='verification_runs', to='msx.workspace')),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='Binding',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('name', models.CharField(max_length=64, validators=[django.core.validators.RegexValidator('^[A-Za-z_][A-Za-z0-9_-]{0,63}$', 'Enter a valid binding name.')])),
                ('kind', models.CharField(choices=[('tree', 'Tree'), ('forest', 'Workspace'), ('sum', 'Sum'), ('assembly', 'Assembly operator')], max_length=16)),
                ('text', models.TextField()),
                ('payload', models.JSONField(default=dict)),
                ('workspace', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='bindings', to='msx.workspace')),
            ],
            options={
                'ordering': ['workspace', 'name'],
                'unique_together': {('workspace', 'name')},
            },
        ),
    ]
