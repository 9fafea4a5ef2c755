"""Command-line front end: parse, run, verify and export morphosyntactic values."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional

from django.core.management.base import BaseCommand, CommandError

from ... import notation
from ...config import ProjectConfig, load_config, resolve_config
from ...errors import MsxError, StructureError
from ...export import FORMATS, export
from ...models import Binding, VerificationRun, Workspace
from ...scripts import ScriptContext, load_script, run_script
from ...verification import MUTANTS, SUITES, run_suite


def _common(parser) -> None:
    parser.add_argument("--config", help="Project config file (JSON or TOML)")
    parser.add_argument("--session", help="Stored session whose bindings are visible as @name")
    parser.add_argument("--format", choices=FORMATS, default="text", help="Output format")
    parser.add_argument("--output", help="Write the result to this file instead of stdout")


class Command(BaseCommand):
    help = "Parse, rewrite, verify and export morphosyntactic trees and workspaces."

    def add_arguments(self, parser):
        subcommands = parser.add_subparsers(dest="subcommand", required=True)

        parse = subcommands.add_parser("parse", help="Parse and validate a value")
        parse.add_argument("source", help="File in text notation or JSON, or the value itself with --inline")
        parse.add_argument("--kind", choices=notation.KINDS, default="tree")
        parse.add_argument("--inline", action="store_true", help="Treat SOURCE as the value text")
        parse.add_argument("--bind", help="Store the parsed value in the session under this name")
        _common(parse)

        run = subcommands.add_parser("run", help="Run an operation script")
        run.add_argument("script", help="JSON operation script")
        run.add_argument("--target", help="Starting value: @name, or text parsed with --kind")
        run.add_argument("--kind", choices=notation.KINDS, default="tree")
        run.add_argument("--bind", help="Store the result in the session under this name")
        _common(run)

        verify = subcommands.add_parser("verify", help="Run verification suites")
        verify.add_argument("suites", nargs="+", choices=list(SUITES) + ["all"])
        verify.add_argument("--seed", type=int)
        verify.add_argument("--budget", type=int)
        verify.add_argument("--mutant", choices=MUTANTS)
        _common(verify)

        export_parser = subcommands.add_parser("export", help="Export a value as DOT, JSON or text")
        export_parser.add_argument("source", help="@name from the session, a file, or the value itself with --inline")
        export_parser.add_argument("--kind", choices=notation.KINDS, default="tree")
        export_parser.add_argument("--inline", action="store_true")
        _common(export_parser)
        export_parser.set_defaults(format="dot")

        config = subcommands.add_parser("config", help="Inspect the project config")
        config.add_argument("action", choices=["check"])
        _common(config)

    def handle(self, *args, **options):
        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            handler(options)
        except MsxError as exc:
            raise CommandError(f"{exc.code}: {exc}", returncode=1) from exc

    # plumbing

    def _session(self, options: Dict[str, Any], create: bool = False) -> Optional[Workspace]:
        name = options.get("session")
        if not name:
            return None
        if create:
            workspace, created = Workspace.objects.get_or_create(name=name)
            if created:
                if options.get("config"):
                    workspace.config = load_config(options["config"]).data
                    workspace.save()
                self.stdout.write(self.style.SUCCESS(f"Created session {name}"))
            return workspace
        try:
            return Workspace.objects.get(name=name)
        except Workspace.DoesNotExist:
            raise CommandError(f"no session named {name!r}", returncode=1) from None

    def _config(self, options: Dict[str, Any], workspace: Optional[Workspace]) -> ProjectConfig:
        if options.get("config"):
            return load_config(options["config"])
        return resolve_config(data=workspace.config if workspace is not None else None)

    def _read(self, source: str, kind: str, inline: bool, ctx: ScriptContext) -> notation.Value:
        if source.startswith("@"):
            return ctx.value(source)
        if inline:
            return notation.parse(source, kind, ctx.config.inventory)
        path = Path(source)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StructureError(f"cannot read {path}: {exc.strerror}", {"path": str(path)}) from exc
        if path.suffix == ".json":
            return notation.validate(notation.loads(text), kind)
        return notation.parse(text.strip(), kind, ctx.config.inventory)

    def _emit(self, text: str, options: Dict[str, Any]) -> None:
        if options.get("output"):
            try:
                Path(options["output"]).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise CommandError(f"cannot write {options['output']}: {exc.strerror}", returncode=1) from exc
            self.stdout.write(self.style.SUCCESS(f"Wrote {options['output']}"))
        else:
            self.stdout.write(text.rstrip("\n"))

    def _bind(self, workspace: Optional[Workspace], name: Optional[str], value: notation.Value) -> None:
        if not name:
            return
        if workspace is None:
            raise CommandError("--bind needs --session", returncode=1)
        Binding.store(workspace, name, value)
        self.stdout.write(self.style.SUCCESS(f"Bound {name} in session {workspace.name}"))

    # subcommands

    def handle_parse(self, options: Dict[str, Any]) -> None:
        workspace = self._session(options, create=bool(options.get("bind")))
        ctx = ScriptContext(self._config(options, workspace), workspace.values() if workspace else {})
        value = self._read(options["source"], options["kind"], options["inline"], ctx)
        self._emit(export(value, options["format"]), options)
        self._bind(workspace, options.get("bind"), value)

    def handle_run(self, options: Dict[str, Any]) -> None:
        workspace = self._session(options, create=bool(options.get("bind")))
        ctx = ScriptContext(self._config(options, workspace), workspace.values() if workspace else {})
        script = load_script(options["script"])
        target = options.get("target")
        value = self._read(target, options["kind"], True, ctx) if target else None
        result = run_script(script, ctx, value)
        if options["format"] == "text":
            lines = result.lines() + [f"result: {notation.format_value(result.value)}"]
            self._emit("\n".join(lines) + "\n", options)
        else:
            self._emit(export(result.value, options["format"]), options)
        self._bind(workspace, options.get("bind"), result.value)

    def handle_verify(self, options: Dict[str, Any]) -> None:
        workspace = self._session(options)
        config = self._config(options, workspace)
        names = list(SUITES) if "all" in options["suites"] else list(dict.fromkeys(options["suites"]))
        reports = [
            run_suite(name, config, seed=options.get("seed"), budget=options.get("budget"), mutant=options.get("mutant"))
            for name in names
        ]
        if workspace is not None:
            for report in reports:
                VerificationRun.record(report, workspace)
        if options["format"] == "json":
            self._emit(json.dumps([report.as_dict() for report in reports], indent=2) + "\n", options)
        else:
            self._emit("\n".join(line for report in reports for line in report.lines()) + "\n", options)
        failed = [report.suite for report in reports if not report.passed]
        if failed:
            raise CommandError(f"verification failed: {', '.join(failed)}", returncode=2)
        self.stdout.write(self.style.SUCCESS(f"{len(reports)} suite(s) passed"))

    def handle_export(self, options: Dict[str, Any]) -> None:
        workspace = self._session(options)
        ctx = ScriptContext(self._config(options, workspace), workspace.values() if workspace else {})
        value = self._read(options["source"], options["kind"], options["inline"], ctx)
        self._emit(export(value, options["format"]), options)

    def handle_config(self, options: Dict[str, Any]) -> None:
        config = self._config(options, self._session(options))
        inventory = config.inventory
        self.stdout.write(f"atoms: {len(inventory.atoms) or 'open'}")
        self.stdout.write(f"feature categories: {len(inventory.categories) or 'open'}")
        self.stdout.write(f"gamma_sm pairs: {len(config.gamma_sm.pairs)}")
        self.stdout.write(f"copy cancellation: {config.copy_cancellation.value}")
        self.stdout.write(self.style.SUCCESS("Config is valid."))
