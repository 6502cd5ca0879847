"""Shared molecules and rules (verbatim GML from the formose example set)."""
from grammod.gml import parse_graph_gml, parse_rule_gml
from grammod.smiles import parse_smiles

KETO_ENOL_IONIC_GML = """rule [
   left [
      edge [ source 1 target 4 label "-" ]
      edge [ source 1 target 2 label "-" ]
      edge [ source 2 target 3 label "=" ]
      node [ id 3 label "O" ]
      node [ id 4 label "H" ]
   ]
   context [
      node [ id 1 label "C" ]
      node [ id 2 label "C" ]
   ]
   right [
      edge [ source 1 target 2 label "=" ]
      edge [ source 2 target 3 label "-" ]
      node [ id 3 label "O-" ]
      node [ id 4 label "H+" ]
   ]
]"""

KETO_ENOL_GML = """rule [   ruleID "Keto-enol isomerization"
	left [      edge [ source 1 target 4 label "-" ]   edge [ source 1 target 2 label "-" ]
	            edge [ source 2 target 3 label "=" ]                                      ]
	context [   node [ id 1 label "C" ]   node [ id 2 label "C" ]
	            node [ id 3 label "O" ]   node [ id 4 label "H" ]                         ]
	right [     edge [ source 1 target 2 label "=" ]   edge [ source 2 target 3 label "-" ]
	            edge [ source 3 target 4 label "-" ]                                      ]
]"""

ALDOL_ADD_GML = """rule [   ruleID "Aldol Addition"
	left [      edge [ source 1 target 2 label "=" ]   edge [ source 2 target 3 label "-" ]
	            edge [ source 3 target 4 label "-" ]   edge [ source 5 target 6 label "=" ]   ]
	context [   node [ id 1 label "C" ]   node [ id 2 label "C" ]   node [ id 3 label "O" ]
	            node [ id 4 label "H" ]   node [ id 5 label "O" ]   node [ id 6 label "C" ]   ]
	right [     edge [ source 1 target 2 label "-" ]   edge [ source 2 target 3 label "=" ]
	            edge [ source 5 target 6 label "-" ]
	            edge [ source 4 target 5 label "-" ]   edge [ source 6 target 1 label "-" ]   ]
]"""

ETHANOL_GML = """graph [
	node [ id 0 label "C" ]   node [ id 1 label "C" ]   node [ id 2 label "O" ]
	node [ id 3 label "H" ]   node [ id 4 label "H" ]   node [ id 5 label "H" ]
	node [ id 6 label "H" ]   node [ id 7 label "H" ]   node [ id 8 label "H" ]
	edge [ source 1 target 0 label "-" ]   edge [ source 2 target 1 label "-" ]
	edge [ source 3 target 0 label "-" ]   edge [ source 4 target 0 label "-" ]
	edge [ source 5 target 0 label "-" ]   edge [ source 6 target 1 label "-" ]
	edge [ source 7 target 1 label "-" ]   edge [ source 8 target 2 label "-" ]
]"""

SMALL_GML = """rule [         ruleID "Small"
	left  [   node [ id 1 label "H" ]    node [ id 2 label "O" ]   edge [ source 1 target 2 label "-" ]   ]
	right [   node [ id 1 label "H+" ]   node [ id 2 label "O-" ]                                         ]
]"""

LARGE_GML = """rule [           ruleID "Large"
	left    [   node [ id 1 label "H" ]    node [ id 2 label "O" ]   edge [ source 1 target 2 label "-" ]   ]
	context [   node [ id 3 label "C" ]    edge [ source 2 target 3 label "-" ]                             ]
	right   [   node [ id 1 label "H+" ]   node [ id 2 label "O-" ]
	]
]"""

DESTROY_VERTEX_GML = 'rule [   left    [   node [ id 1 label "A" ]   ]   ]'
CREATE_VERTEX_GML = 'rule [   right   [   node [ id 1 label "A" ]   ]   ]'
IDENTITY_GML = 'rule [   context [   node [ id 1 label "A" ]   ]   ]'
LABEL_CHANGE_GML = """rule [
	left    [   node [ id 1 label "A" ]   edge [ source 1 target 2 label "A" ]   ]
	# GML can have Python-style line comments too
	context [   node [ id 2 label "Q" ]                                          ]
	right   [   node [ id 1 label "B" ]   edge [ source 1 target 2 label "B" ]   ]
]"""

# Creates an edge between two existing "A" vertices.
ADD_EDGE_GML = """rule [ ruleID "addEdge"
	context [ node [ id 1 label "A" ] node [ id 2 label "A" ] ]
	right [ edge [ source 1 target 2 label "-" ] ]
]"""


def formaldehyde():
    return parse_smiles("C=O", name="Formaldehyde")


def glycolaldehyde():
    return parse_smiles("OCC=O", name="Glycolaldehyde")


def acetaldehyde():
    return parse_smiles("CC=O", name="Acetaldehyde")


def enediol():
    return parse_smiles("OC=CO", name="Ethenediol")


def keto_enol_ionic():
    return parse_rule_gml(KETO_ENOL_IONIC_GML, name="ketoEnol")


def keto_enol_f():
    return parse_rule_gml(KETO_ENOL_GML, name="ketoEnol_F")


def keto_enol_b():
    return parse_rule_gml(KETO_ENOL_GML, invert=True, name="ketoEnol_B")


def aldol_add_f():
    return parse_rule_gml(ALDOL_ADD_GML, name="aldolAdd_F")


def aldol_add_b():
    return parse_rule_gml(ALDOL_ADD_GML, invert=True, name="aldolAdd_B")


def formose_rules():
    return [keto_enol_f(), keto_enol_b(), aldol_add_f(), aldol_add_b()]


def ethanol_gml():
    return parse_graph_gml(ETHANOL_GML, name="Ethanol4")
