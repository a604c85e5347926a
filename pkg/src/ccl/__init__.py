"""Clone co-change analyzer.

Detects type-1/type-2 clone pairs in a git repository's Java sources,
extracts each snippet's line-range commit history, and classifies
co-changed commits and clone pairs that may hide inconsistent edits.
"""

__version__ = "0.1.0"
