"""
Utilitaires partagés : configuration, journalisation, erreurs et traçage.
"""
