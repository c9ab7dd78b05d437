"""PDA package."""
