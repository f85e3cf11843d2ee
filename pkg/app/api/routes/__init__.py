from fastapi import APIRouter, Depends

from app.api.auth import verify_token
from app.api.routes.experiments import router as experiments_router
from app.api.routes.games import router as games_router
from app.api.routes.layouts import router as layouts_router
from app.api.routes.notifications import router as notifications_router

api_router = APIRouter(prefix="/api/v1", dependencies=[Depends(verify_token)])

api_router.include_router(games_router, prefix="/games", tags=["games"])
api_router.include_router(experiments_router, prefix="/experiments", tags=["experiments"])
api_router.include_router(layouts_router, prefix="/layouts", tags=["layouts"])
api_router.include_router(notifications_router, prefix="/notifications", tags=["notifications"])
