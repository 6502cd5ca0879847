"""``grammod`` command line.

Each invocation replays a JSON workspace manifest listing earlier loads, so
a shell session of ``grammod load ...`` calls works like a script.

Exit codes: 0 success, 1 runtime failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .dg import ExportOptions, export_derivation_dpo, export_dot, export_json, import_json
from .derivation import enumerate_derivations
from .errors import GrammodError, ParseError
from .gml import parse_graph_gml, parse_rule_gml, write_graph_gml, write_rule_gml
from .graph import Graph, GraphRegistry, count_isomorphisms, count_monomorphisms
from .rule import Rule, count_rule_isomorphisms, count_rule_monomorphisms
from .rulecomp import RcEvaluator, parse_rc_expression
from .smiles import parse_graph_dfs, parse_smiles
from .strategy import DEFAULT_REPEAT_CAP, dgRuleComp, parse_graph_predicate, parse_strategy

DEFAULT_WORKSPACE = "grammod-workspace.json"


class UsageError(GrammodError):
    """Bad arguments, unknown names, malformed config."""


# config --------------------------------------------------------------------

@dataclass
class Config:
    max_matches: int = 1
    common_overlap_cap: int = 8
    repeat_cap: int = DEFAULT_REPEAT_CAP
    subset_new_only: bool = False


_CONFIG_KEYS = {"maxMatches": "max_matches", "commonOverlapCap": "common_overlap_cap",
                "repeatCap": "repeat_cap", "subset-new-only": "subset_new_only"}


def load_config(path: Optional[str]) -> Config:
    cfg = Config()
    if path is None:
        return cfg
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str  # keep key case
    try:
        text = Path(path).read_text()
        parser.read_string("[grammod]\n" + text, source=path)
    except OSError as exc:
        raise UsageError(f"{path}: cannot read config: {exc.strerror}") from None
    except configparser.Error as exc:
        raise UsageError(f"{path}: malformed config: {exc}") from None
    for key, raw in parser["grammod"].items():
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}: unknown config key {key!r}")
        value = raw.strip().strip('"')
        attr = _CONFIG_KEYS[key]
        if attr == "subset_new_only":
            if value.lower() not in ("true", "false"):
                raise UsageError(f"{path}: {key} must be true or false")
            setattr(cfg, attr, value.lower() == "true")
            continue
        try:
            number = int(value)
        except ValueError:
            raise UsageError(f"{path}: {key} must be an integer") from None
        if number < (1 if attr == "max_matches" else 0):
            raise UsageError(f"{path}: {key} out of range: {number}")
        setattr(cfg, attr, number)
    return cfg


# workspace -----------------------------------------------------------------

@dataclass
class Workspace:
    path: Path
    entries: list = field(default_factory=list)
    graphs: dict = field(default_factory=dict)
    rules: dict = field(default_factory=dict)
    dgs: dict = field(default_factory=dict)

    @classmethod
    def open(cls, path: str) -> "Workspace":
        ws = cls(Path(path))
        if ws.path.exists():
            try:
                doc = json.loads(ws.path.read_text())
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}: corrupt workspace manifest: {exc}") from None
            for entry in doc.get("loads", []):
                ws._apply(entry)
        return ws

    def save(self) -> None:
        self.path.write_text(json.dumps({"loads": self.entries}, indent=1) + "\n")

    def _apply(self, entry: dict) -> None:
        kind, name = entry["kind"], entry["name"]
        if kind == "dg":
            self.dgs[name] = entry["path"]
        elif kind == "rule-gml":
            text = _read(entry["path"])
            self.rules[name] = parse_rule_gml(text, invert=entry.get("invert", False),
                                              name=name, source=entry["path"])
        elif kind == "gml":
            self.graphs[name] = parse_graph_gml(_read(entry["path"]), name=name,
                                                source=entry["path"])
        elif kind == "smiles":
            self.graphs[name] = parse_smiles(entry["text"], name=name, source="<smiles>")
        elif kind == "dfs":
            self.graphs[name] = parse_graph_dfs(entry["text"], name=name, source="<dfs>")
        else:
            raise UsageError(f"unknown workspace entry kind {kind!r}")
        self.entries.append(entry)

    def add(self, entry: dict) -> None:
        name = entry["name"]
        table = {"dg": self.dgs, "rule-gml": self.rules}.get(entry["kind"], self.graphs)
        if name in table and entry["kind"] != "dg":
            raise UsageError(f"duplicate name {name!r}")
        if entry["kind"] == "dg":
            self.entries = [e for e in self.entries if not (e["kind"] == "dg" and e["name"] == name)]
        self._apply(entry)

    def graph(self, name: str) -> Graph:
        if name not in self.graphs:
            raise UsageError(f"unknown graph {name!r}")
        return self.graphs[name]

    def rule(self, name: str) -> Rule:
        if name not in self.rules:
            raise UsageError(f"unknown rule {name!r}")
        return self.rules[name]

    def graph_refs(self) -> dict:
        refs = dict(self.graphs)
        refs.setdefault("inputGraphs", list(self.graphs.values()))
        return refs

    def rule_refs(self) -> dict:
        refs = dict(self.rules)
        refs.setdefault("inputRules", list(self.rules.values()))
        return refs


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror}") from None


def _out_dir(arg: Optional[str]) -> Path:
    out = Path(os.environ.get("GRAMMOD_OUT") or arg or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in name) or "unnamed"


# commands ------------------------------------------------------------------

def cmd_load(args, ws: Workspace, cfg: Config) -> int:
    if args.gml:
        entry = {"kind": "gml", "path": str(Path(args.gml).resolve()),
                 "name": args.name or Path(args.gml).stem}
    elif args.rule_gml:
        entry = {"kind": "rule-gml", "path": str(Path(args.rule_gml).resolve()),
                 "name": args.name or Path(args.rule_gml).stem, "invert": args.invert}
    elif args.smiles:
        entry = {"kind": "smiles", "text": args.smiles, "name": args.name or args.smiles}
    else:
        entry = {"kind": "dfs", "text": args.dfs, "name": args.name or args.dfs}
    if args.invert and entry["kind"] != "rule-gml":
        raise UsageError("--invert only applies to --rule-gml")
    ws.add(entry)
    ws.save()
    obj = ws.rules.get(entry["name"]) if entry["kind"] == "rule-gml" else ws.graphs[entry["name"]]
    what = "rule" if entry["kind"] == "rule-gml" else "graph"
    print(f"loaded {what} {entry['name']} ({obj.num_vertices} vertices, {obj.num_edges} edges)")
    return 0


def cmd_morphism(args, ws: Workspace, cfg: Config) -> int:
    limit = args.max if args.max is not None else cfg.max_matches
    if limit < 1:
        raise UsageError("--max must be >= 1")
    if args.pattern in ws.rules and args.host in ws.rules:
        p, h = ws.rules[args.pattern], ws.rules[args.host]
        f = count_rule_isomorphisms if args.kind == "iso" else count_rule_monomorphisms
    else:
        p, h = ws.graph(args.pattern), ws.graph(args.host)
        f = count_isomorphisms if args.kind == "iso" else count_monomorphisms
    print(f(p, h, limit))
    return 0


def cmd_apply(args, ws: Workspace, cfg: Config) -> int:
    rule = ws.rule(args.rule)
    registry = GraphRegistry()
    for name, g in ws.graphs.items():
        registry.register(g, name)
    universe = [ws.graph(n) for n in args.graphs]
    ders = list(enumerate_derivations(rule, universe, registry=registry))
    print(f"{len(ders)} derivations")
    out = _out_dir(args.out) if args.all else None
    for k, d in enumerate(ders):
        tails = " + ".join(g.name for g in d.left)
        heads = " + ".join(g.name for g in d.right)
        print(f"{tails} => {heads}")
        if out is not None:
            for i, g in enumerate(d.right):
                (out / f"d{k}_head{i}_{_safe(g.name)}.gml").write_text(write_graph_gml(g))
    return 0


def cmd_compose(args, ws: Workspace, cfg: Config) -> int:
    text = _read(args.expression)
    exp = parse_rc_expression(text, ws.graph_refs(), ws.rule_refs(), source=args.expression)
    rc = RcEvaluator(ws.rules.values(), common_cap=cfg.common_overlap_cap,
                     connected_common=args.connected_common)
    rules = rc.eval(exp)
    out = _out_dir(args.out)
    for r in rules:
        (out / f"{_safe(r.name)}.gml").write_text(write_rule_gml(r))
    print(f"{len(rules)} rules")
    for r in rules:
        print(r.name)
    return 0


def cmd_explore(args, ws: Workspace, cfg: Config) -> int:
    text = _read(args.program)
    strat = parse_strategy(text, ws.graph_refs(), ws.rule_refs(), source=args.program)
    ev = dgRuleComp(ws.graphs.values(), strat, subset_new_only=cfg.subset_new_only,
                    repeat_cap=cfg.repeat_cap)
    dg = ev.calc()
    out = _out_dir(args.out)
    (out / "dg.json").write_text(export_json(dg))
    (out / "dg.dot").write_text(export_dot(dg))
    ws.add({"kind": "dg", "name": args.name, "path": str((out / "dg.json").resolve())})
    ws.save()
    print(f"classes={dg.num_vertices} hyperedges={dg.num_edges}")
    return 0


def cmd_export(args, ws: Workspace, cfg: Config) -> int:
    path = ws.dgs.get(args.dg, args.dg)
    dg = import_json(_read(path))
    if args.format == "json":
        text = export_json(dg)
    elif args.format == "dot":
        opts = ExportOptions()
        for pred_text in args.hide or ():
            pred = parse_graph_predicate(pred_text, source="--hide")
            opts.push_vertex_visible(lambda g, pred=pred: not pred(g))
        text = export_dot(dg, opts)
    else:
        if args.hyperedge is None:
            raise UsageError("--format dpo needs --hyperedge")
        if not 0 <= args.hyperedge < dg.num_edges:
            raise UsageError(f"unknown hyperedge id {args.hyperedge}")
        text = export_derivation_dpo(dg, args.hyperedge)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# entry point ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grammod", description="Graph grammar exploration tool.")
    p.add_argument("--workspace", default=os.environ.get("GRAMMOD_WORKSPACE", DEFAULT_WORKSPACE),
                   help="workspace manifest (default: %(default)s)")
    p.add_argument("--config", help="key = value config file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("load", help="register a graph or rule in the workspace")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--gml", metavar="PATH")
    src.add_argument("--smiles", metavar="TEXT")
    src.add_argument("--dfs", metavar="TEXT")
    src.add_argument("--rule-gml", metavar="PATH")
    s.add_argument("--invert", action="store_true", help="swap left and right of a rule")
    s.add_argument("--name")
    s.set_defaults(func=cmd_load)

    s = sub.add_parser("morphism", help="count monomorphisms or isomorphisms")
    s.add_argument("kind", choices=["mono", "iso"])
    s.add_argument("pattern")
    s.add_argument("host")
    s.add_argument("--max", type=int, help="stop after this many (default: maxMatches)")
    s.set_defaults(func=cmd_morphism)

    s = sub.add_parser("apply", help="list proper derivations of a rule")
    s.add_argument("rule")
    s.add_argument("graphs", nargs="+")
    s.add_argument("--all", action="store_true", help="also write head graphs as GML")
    s.add_argument("--out")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("compose", help="evaluate a rule composition expression file")
    s.add_argument("expression")
    s.add_argument("--out")
    s.add_argument("--connected-common", action="store_true",
                   help="restrict *rcCommon* to connected overlaps")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("explore", help="run a strategy program")
    s.add_argument("program")
    s.add_argument("--out")
    s.add_argument("--name", default="dg", help="workspace name of the result")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("export", help="export a derivation graph")
    s.add_argument("dg", help="workspace name or path of a dg.json")
    s.add_argument("--format", choices=["dot", "json", "dpo"], default="dot")
    s.add_argument("--hyperedge", type=int)
    s.add_argument("--hide", action="append", metavar="PRED",
                   help='hide classes matching e.g. \'vLabelCount("C") > 4\'')
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        ws = Workspace.open(args.workspace)
        return args.func(args, ws, cfg)
    except (UsageError, ParseError) as exc:
        print(f"grammod: error: {exc}", file=sys.stderr)
        return 2
    except (GrammodError, OSError, KeyError, ValueError) as exc:
        print(f"grammod: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
