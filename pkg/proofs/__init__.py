"""Rule records and proof text formats shared by the proof systems."""
