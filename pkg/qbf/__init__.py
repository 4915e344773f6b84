"""QBF data model and QDIMACS codec."""
