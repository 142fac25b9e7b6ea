from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.routers import bounds, experiments, krylov, model, moments, verify

app = FastAPI(
    title="Chebyshev Krylov Lab API",
    description="Chebyshev-moment Krylov ground-state estimation, block-encoding checks and error bounds",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(model.router, prefix="/model", tags=["Models"])
app.include_router(moments.router, prefix="/moments", tags=["Moments"])
app.include_router(krylov.router, prefix="/krylov", tags=["Krylov"])
app.include_router(verify.router, prefix="/verify", tags=["Verification"])
app.include_router(bounds.router, prefix="/bounds", tags=["Bounds"])
app.include_router(experiments.router, prefix="/experiments", tags=["Experiments"])


@app.get("/")
async def root():
    return {"message": "Chebyshev Krylov Lab API", "version": "1.0.0"}


@app.get("/health")
async def health():
    return {"status": "healthy"}
