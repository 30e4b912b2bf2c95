"""Network boundary: live session over WebSocket plus static cockpit assets."""
