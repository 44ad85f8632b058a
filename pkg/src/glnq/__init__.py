"""Finite general linear groups: classes, flags, transitive sets, designs, cliques."""

__version__ = "0.1.0"
