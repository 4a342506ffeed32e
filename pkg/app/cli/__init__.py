# app/cli/__init__.py
