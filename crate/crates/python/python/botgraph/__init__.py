from ._botgraph import BottomClause, Dataset, Toolkit, subsumes

__all__ = ["BottomClause", "Dataset", "Toolkit", "subsumes"]
