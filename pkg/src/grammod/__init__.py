"""Graph grammar toolkit: DPO rewriting, rule composition and strategy-driven
exploration of derivation graphs (reaction networks)."""
from __future__ import annotations

from ._match import BACKEND
from .chem import AtomData, BondType, atom_data_of, bond_type_of
from .derivation import Derivation, enumerate_derivations
from .dg import (DerivationGraph, ExportOptions, export_derivation_dpo, export_dot,
                 export_json, import_json)
from .errors import GrammodError, GraphError, ParseError, RuleError, StrategyError
from .gml import parse_graph_gml, parse_rule_gml, write_gml
from .graph import (Graph, GraphRegistry, build_graph, count_isomorphisms,
                    count_monomorphisms, enumerate_monomorphisms)
from .rule import Rule, count_rule_isomorphisms, count_rule_monomorphisms, invert_rule, make_rule
from .rulecomp import (RcEvaluator, compose, enumerate_overlaps, rcBind, rcCommon, rcId,
                       rcParallel, rcSub, rcSuper, rcUnbind)
from .smiles import parse_graph_dfs, parse_smiles
from .strategy import (addSubset, addUniverse, dgRuleComp, filterSubset, filterUniverse,
                       leftPredicate, parse_strategy, repeat, revive, rightPredicate)

smiles = parse_smiles
graphDFS = parse_graph_dfs
graphGMLString = parse_graph_gml
ruleGMLString = parse_rule_gml

__version__ = "0.1.0"
