"""Order polarities over finite posets: coherence levels, canonical
preorders, concept lattices, relation extension and restriction,
polarity morphisms, and the completion adjunction."""

__version__ = "0.1.0"
