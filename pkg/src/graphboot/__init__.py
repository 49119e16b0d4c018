"""Graph (H-edge) bootstrap percolation on complete host graphs."""
from .errors import (
    DomainError,
    GraphBootError,
    InvalidInputError,
    NotInfectedError,
    ParseError,
    SizeLimitError,
    TrivialWitnessError,
    UnsupportedPatternError,
)
from .graph import Edge, SimpleGraph, erdos_renyi, graph_from_edge_list, is_connected, to_edge_list
from .patterns import PatternGraph, named_pattern
from .engine import InfectionTrace, close_generic, close_kr, infection_round, percolates

__version__ = "0.1.0"
