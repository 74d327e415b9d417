"""Constructions and finite checks for linearly ordered expansions of
colored graphs, bi-orders and F_p vector spaces."""

from order_forge.biorder import ArithCarrier, BiOrder, decode, encode, verify_roundtrip
from order_forge.graph import ColoredRegularGraph, SurgeryStuck, generate, surgery
from order_forge.probe import PlantImpossible, VertexOrdering, end_to_end, plant, scan

__version__ = "0.1.0"

__all__ = [
    "ArithCarrier",
    "BiOrder",
    "ColoredRegularGraph",
    "PlantImpossible",
    "SurgeryStuck",
    "VertexOrdering",
    "decode",
    "encode",
    "end_to_end",
    "generate",
    "plant",
    "scan",
    "surgery",
    "verify_roundtrip",
]
